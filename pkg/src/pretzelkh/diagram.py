"""Planar diagrams for 3-strand pretzel links and general PD-coded links.

The pretzel P(k1, k2, k3) is built from a fixed template: three vertical
twist regions ("columns") side by side, column i carrying |ki| crossings
stacked bottom to top, closed up by six arcs:

    top arcs:    TR0-TL1, TR1-TL2, and the long arc TL0-TR2
    bottom arcs: BR0-BL1, BR1-BL2, and the long arc BL0-BR2

ki > 0 means the strand running bottom-left to top-right passes over at
every crossing of column i; ki < 0 means it passes under.  Crossings are
ordered column 0 first, then 1, then 2, bottom to top within a column.

The basepoint sits on the long bottom arc BL0-BR2.  Orientation patterns
are read off three reference arrows, all on the bottom closure arcs:

    arrow 1: long arc BL0-BR2, positive direction BL0 -> BR2
    arrow 2: arc BR0-BL1, positive direction BR0 -> BL1
    arrow 3: arc BR1-BL2, positive direction BR1 -> BL2 (always fixed +)

A pattern "+-" means the link is oriented so arrows 1 and 2 read + and -
(after flipping the whole orientation, if needed, to make arrow 3 read +).

Crossing tuples follow the PD convention: four edge labels listed
counterclockwise starting from the incoming under-strand edge.  The
0-smoothing of X(a,b,c,d) joins a-b and c-d, the 1-smoothing joins a-d
and b-c; with this convention the 0-smoothing at a positive crossing is
the oriented one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Optional

PATTERNS = ("++", "+-", "-+", "--")

# Table of (n_plus, n_minus) as multiples of (p, q, r) per orientation pattern.
_POSITIVE_COLUMNS = {
    "++": (False, False, True),
    "+-": (True, True, True),
    "-+": (True, False, False),
    "--": (False, True, False),
}


class DiagramError(ValueError):
    pass


class OrientationError(DiagramError):
    pass


class Classification(Enum):
    QUASI_ALTERNATING = "quasi-alternating"
    THIN_NON_QA = "thin-non-qa"
    THICK_NON_QA = "thick-non-qa"


@dataclass(frozen=True)
class PretzelParams:
    """Signed twist counts of the three columns."""

    k1: int
    k2: int
    k3: int

    @classmethod
    def parse(cls, text: str) -> "PretzelParams":
        m = re.fullmatch(r"\s*P\(\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*", text)
        if m is None:
            raise DiagramError(f"not a pretzel spec: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)), int(m.group(3)))

    @property
    def twists(self) -> tuple[int, int, int]:
        return (self.k1, self.k2, self.k3)

    def __str__(self) -> str:
        return f"P({self.k1},{self.k2},{self.k3})"


def normalize_params(params: PretzelParams) -> tuple[int, int, int, bool]:
    """Bring twist counts to the standard form P(-p, q, r), q <= r.

    Returns (p, q, r, mirrored).  Mirroring (negating all three counts) is
    applied when two or three entries are negative; it replaces the link by
    its mirror image, which the caller must account for.  Never silent:
    the flag is always returned.
    """
    ks = list(params.twists)
    if any(k == 0 for k in ks):
        raise DiagramError("normalization requires nonzero twist counts")
    mirrored = sum(1 for k in ks if k < 0) >= 2
    if mirrored:
        ks = [-k for k in ks]
    negs = [k for k in ks if k < 0]
    if len(negs) != 1:
        raise DiagramError(
            f"P({params.k1},{params.k2},{params.k3}) is alternating; "
            "the pretzel engine handles the P(-p,q,r) family"
        )
    p = -negs[0]
    q, r = sorted(k for k in ks if k > 0)
    return p, q, r, mirrored


@dataclass(frozen=True)
class PlanarDiagram:
    """A closed link diagram: crossings with labelled edges, plus free circles.

    crossings[i] is a 4-tuple of edge labels, counterclockwise from the
    under-strand's incoming edge.  signs[i] is the crossing sign for the
    diagram's stored orientation.  extra_joins are label pairs connected by
    crossingless arcs (used when an edge label appears only once across the
    crossings).  A basepoint of None is only legal alongside free circles,
    in which case the basepoint sits on the first free circle.
    """

    crossings: tuple[tuple[int, int, int, int], ...]
    signs: tuple[int, ...]
    basepoint: Optional[int]
    free_circles: int = 0
    extra_joins: tuple[tuple[int, int], ...] = ()
    components: int = 1
    n_plus: int = 0
    n_minus: int = 0
    # provenance, not part of diagram identity
    pretzel: Optional[tuple[int, int, int]] = field(default=None, compare=False)
    orientation: Optional[str] = field(default=None, compare=False)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    def edge_labels(self) -> list[int]:
        seen = []
        present = set()
        for x in self.crossings:
            for e in x:
                if e not in present:
                    present.add(e)
                    seen.append(e)
        return sorted(seen)

    def to_pd_text(self) -> str:
        parts = [f"X({a},{b},{c},{d})" for (a, b, c, d) in self.crossings]
        if self.free_circles:
            parts.append(f"circles={self.free_circles}")
        if self.basepoint is not None:
            parts.append(f"base={self.basepoint}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# Pretzel template construction
# ---------------------------------------------------------------------------

_CLOSURE_SEGMENTS = (
    ("top", 0, 1),
    ("top", 1, 2),
    ("top", 0, 2),  # long arc TL0-TR2
    ("bot", 0, 1),
    ("bot", 1, 2),
    ("bot", 0, 2),  # long arc BL0-BR2, carries the basepoint
)

_ARROW_SEGMENTS = (("bot", 0, 2), ("bot", 0, 1), ("bot", 1, 2))


class _Template:
    """Segment-level model of the pretzel diagram, used for tracing."""

    def __init__(self, twists: tuple[int, int, int]):
        self.twists = twists
        self.m = [abs(k) for k in twists]
        self.hand = [1 if k > 0 else (-1 if k < 0 else 0) for k in twists]
        if all(k == 0 for k in twists):
            raise DiagramError(
                "all twist counts are zero; model the unlink as free circles"
            )
        self._build_segments()
        self._build_edges()
        self._trace()

    # -- segments and ports -------------------------------------------------

    def _build_segments(self):
        seg_ports: dict[tuple, list] = {}
        for i in range(3):
            for side in "LR":
                for g in range(self.m[i] + 1):
                    ends = []
                    if g == 0:
                        ends.append(("pb", i, side))
                    if g == self.m[i]:
                        ends.append(("pt", i, side))
                    seg_ports[("col", i, side, g)] = ends
        tops = {("top", 0, 1): (("pt", 0, "R"), ("pt", 1, "L")),
                ("top", 1, 2): (("pt", 1, "R"), ("pt", 2, "L")),
                ("top", 0, 2): (("pt", 0, "L"), ("pt", 2, "R")),
                ("bot", 0, 1): (("pb", 0, "R"), ("pb", 1, "L")),
                ("bot", 1, 2): (("pb", 1, "R"), ("pb", 2, "L")),
                ("bot", 0, 2): (("pb", 0, "L"), ("pb", 2, "R"))}
        for seg, ports in tops.items():
            seg_ports[seg] = list(ports)
        self.seg_ports = seg_ports

    # -- weld segments through 2-valent ports into edges --------------------

    def _build_edges(self):
        port_segs: dict[tuple, list] = {}
        for seg, ports in self.seg_ports.items():
            for pt in ports:
                port_segs.setdefault(pt, []).append(seg)
        parent: dict[tuple, tuple] = {seg: seg for seg in self.seg_ports}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[rb] = ra

        for segs in port_segs.values():
            assert len(segs) == 2
            union(segs[0], segs[1])
        self._find = find

        # crossing corners: crossing (i, j) spans column gaps j (bottom) and
        # j+1 (top); corner -> segment attached there.
        self.crossing_ids = []
        corner_seg = {}
        for i in range(3):
            for j in range(self.m[i]):
                cid = (i, j)
                self.crossing_ids.append(cid)
                corner_seg[(cid, "bl")] = ("col", i, "L", j)
                corner_seg[(cid, "br")] = ("col", i, "R", j)
                corner_seg[(cid, "tl")] = ("col", i, "L", j + 1)
                corner_seg[(cid, "tr")] = ("col", i, "R", j + 1)
        self.corner_seg = corner_seg

        # edge classes and their crossing attachments
        edge_of_seg = {seg: find(seg) for seg in self.seg_ports}
        self.edge_of_seg = edge_of_seg
        attachments: dict[tuple, list] = {}
        for (cid, corner), seg in corner_seg.items():
            attachments.setdefault(edge_of_seg[seg], []).append((cid, corner))
        for e in set(edge_of_seg.values()):
            attachments.setdefault(e, [])
        for e in attachments:
            attachments[e].sort(key=lambda ac: (ac[0], ac[1]))
        self.attachments = attachments
        self.free_edge_classes = sorted(
            e for e, at in attachments.items() if not at
        )

    # -- strand passes through a crossing ------------------------------------

    # the two strand passes join bl-tr and br-tl regardless of which one
    # crosses over; handedness only decides the under pair
    _PASS_PARTNER = {"bl": "tr", "tr": "bl", "br": "tl", "tl": "br"}

    def _pass_partner(self, cid, corner):
        return self._PASS_PARTNER[corner]

    def _under_corners(self, cid):
        i, _ = cid
        return ("br", "tl") if self.hand[i] > 0 else ("bl", "tr")

    # -- canonical component trace -------------------------------------------

    def _trace(self):
        attachments = self.attachments
        comp_of_edge: dict[tuple, int] = {}
        flow_in: dict[tuple, bool] = {}  # (cid, corner) -> canonical flow enters
        succ: dict[tuple, tuple] = {}  # directed edge successor (canonical)
        edge_dir: dict[tuple, int] = {}  # canonical: 0 = att[0]->att[1]
        ncomp = 0
        ordered = sorted(e for e, at in attachments.items() if at)
        for start in ordered:
            if start in comp_of_edge:
                continue
            comp = ncomp
            ncomp += 1
            # walk toward attachment index 1 (edges here always have 2)
            edge, to_idx = start, 1
            while True:
                comp_of_edge[edge] = comp
                edge_dir[edge] = 1 - to_idx  # traversed from the other end
                cid, corner = attachments[edge][to_idx]
                flow_in[(cid, corner)] = True
                out_corner = self._pass_partner(cid, corner)
                flow_in[(cid, out_corner)] = False
                nxt = self.edge_of_seg[self.corner_seg[(cid, out_corner)]]
                at = attachments[nxt]
                # continue through the exit corner toward the other end
                idx = next(k for k, ac in enumerate(at)
                           if ac == (cid, out_corner))
                succ[edge] = nxt
                edge, to_idx = nxt, 1 - idx
                if edge == start and to_idx == 1:
                    break
        self.comp_of_edge = comp_of_edge
        self.flow_in = flow_in
        self.succ = succ
        self.edge_dir = edge_dir
        self.ncomp = ncomp

    # -- arrows ---------------------------------------------------------------

    def _arrow_data(self):
        """For each reference arrow: (component, canonical sign).

        An arrow sitting on a crossingless component reads either way; it
        is reported as (None, 0).
        """
        out = []
        for seg in _ARROW_SEGMENTS:
            edge = self.edge_of_seg[seg]
            if edge not in self.comp_of_edge:
                out.append((None, 0))
                continue
            comp = self.comp_of_edge[edge]
            # canonical traversal enters the edge at attachment (1 - edge_dir)
            # and leaves at edge_dir ... we need the direction along the
            # closure segment itself.  The segment's reference direction is
            # first port -> second port as listed in _build_segments; relate
            # it to the edge traversal by walking the segment chain.
            sign = self._segment_direction(edge, seg)
            out.append((comp, sign))
        return out

    def _segment_direction(self, edge, seg):
        """+1 if canonical traversal runs seg from its first port to its
        second port, -1 otherwise."""
        at = self.attachments[edge]
        d = self.edge_dir[edge]
        start_att = at[d]  # (cid, corner) where traversal leaves a crossing
        # walk the chain of segments from start_att's corner segment
        cur = self.corner_seg[start_att]
        prev_port = None
        visited = 0
        while True:
            visited += 1
            assert visited < 10000
            if cur == seg:
                ports = self.seg_ports[seg]
                # entered through prev_port; +1 if that is ports[0]
                if prev_port is None:
                    # the chain starts at a crossing corner, so a closure
                    # segment cannot be first unless it has a crossing end,
                    # which closure segments never do
                    raise AssertionError("closure segment at chain start")
                return 1 if prev_port == ports[0] else -1
            nxt_port = None
            for pt in self.seg_ports[cur]:
                if pt != prev_port:
                    nxt_port = pt
            if nxt_port is None:
                raise AssertionError("broken segment chain")
            # cross the port to the adjacent segment
            for other in self._port_neighbors(nxt_port):
                if other != cur:
                    cur = other
                    break
            prev_port = nxt_port

    def _port_neighbors(self, port):
        out = []
        for seg, ports in self.seg_ports.items():
            if port in ports:
                out.append(seg)
        return out

    # -- orientations ----------------------------------------------------------

    def pattern_table(self) -> dict[str, tuple[int, ...]]:
        """Map each realizable orientation pattern to its component flips.

        A flip vector eps has eps[c] = -1 when component c is traversed
        against the canonical trace.  Arrow 3 is required to read +.
        """
        arrows = self._arrow_data()
        (c1, s1), (c2, s2), (c3, s3) = arrows
        table: dict[str, tuple[int, ...]] = {}
        for bits in range(1 << self.ncomp):
            eps = tuple(-1 if bits >> c & 1 else 1 for c in range(self.ncomp))
            if c3 is not None and s3 * eps[c3] != 1:
                continue
            ones = [(s1 * eps[c1],)] if c1 is not None else [(1,), (-1,)]
            twos = [(s2 * eps[c2],)] if c2 is not None else [(1,), (-1,)]
            for (a1,) in ones:
                for (a2,) in twos:
                    pat = ("+" if a1 == 1 else "-") + \
                        ("+" if a2 == 1 else "-")
                    table.setdefault(pat, eps)
        return table

    def column_parallel(self, eps) -> list[Optional[bool]]:
        out: list[Optional[bool]] = []
        for i in range(3):
            if self.m[i] == 0:
                out.append(None)
                continue
            cid = (i, 0)
            ins = []
            for corner in ("bl", "br"):
                edge = self.edge_of_seg[self.corner_seg[(cid, corner)]]
                f = self.flow_in[(cid, corner)]
                if eps[self.comp_of_edge[edge]] == -1:
                    f = not f
                ins.append(f)
            out.append(ins[0] == ins[1])
        return out

    def crossing_signs(self, eps) -> dict[tuple, int]:
        par = self.column_parallel(eps)
        signs = {}
        for cid in self.crossing_ids:
            i, _ = cid
            signs[cid] = self.hand[i] * (1 if par[i] else -1)
        return signs


@lru_cache(maxsize=None)
def valid_orientation_patterns(p: int, q: int, r: int) -> frozenset:
    """Realizable orientation patterns of the standard P(-p, q, r) diagram."""
    if min(p, q, r) < 1:
        raise DiagramError("twist counts must be positive")
    tpl = _Template((-p, q, r))
    return frozenset(tpl.pattern_table())


def knot_orientation_pattern(p: int, q: int, r: int) -> str:
    """Forced orientation pattern when P(-p, q, r) is a knot."""
    evens = [n % 2 == 0 for n in (p, q, r)]
    if sum(evens) >= 2:
        raise OrientationError("link: pattern must be supplied")
    if evens[1]:
        return "++"
    if evens[0]:
        return "+-"
    if evens[2]:
        return "--"
    return "-+"


def crossing_counts(pattern: str, p: int, q: int, r: int) -> tuple[int, int]:
    """(n+, n-) for the oriented P(-p, q, r) diagram with the given pattern."""
    if pattern not in PATTERNS:
        raise OrientationError(f"unknown pattern {pattern!r}")
    if pattern not in valid_orientation_patterns(p, q, r):
        raise OrientationError(f"pattern {pattern!r} not realizable for "
                               f"P(-{p},{q},{r})")
    pos = _POSITIVE_COLUMNS[pattern]
    n_plus = (p if pos[0] else 0) + (q if pos[1] else 0) + (r if pos[2] else 0)
    return n_plus, p + q + r - n_plus


def classify(p: int, q: int, r: int) -> Classification:
    """Place P(-p, q, r) in the quasi-alternating / thin / thick trichotomy.

    Invariant under swapping q and r.  Inputs must be positive.
    """
    if min(p, q, r) < 1:
        raise DiagramError("twist counts must be positive")
    lo = min(q, r)
    if p == 1 or p > lo:
        return Classification.QUASI_ALTERNATING
    if p % 2 == 1 and p == lo:
        return Classification.THIN_NON_QA
    return Classification.THICK_NON_QA


# ---------------------------------------------------------------------------
# Building the PD diagram proper
# ---------------------------------------------------------------------------

def build_pretzel_pd(params: PretzelParams, pattern: Optional[str] = None) -> PlanarDiagram:
    """Standard diagram of P(k1, k2, k3), oriented and edge-numbered.

    The orientation is the knot's forced one, or `pattern` for links
    (defaulting to the first realizable pattern in ++, +-, -+, -- order).
    Edges are numbered 1, 2, ... along the orientation, starting with the
    basepoint arc; the basepoint is edge 1.
    """
    tpl = _Template(params.twists)
    table = tpl.pattern_table()
    if pattern is None:
        m = [abs(k) for k in params.twists]
        if tpl.ncomp == 1:
            pattern = next(iter(table))
        else:
            pattern = next(pat for pat in PATTERNS if pat in table)
    if pattern not in table:
        raise OrientationError(
            f"pattern {pattern!r} not realizable for {params}")
    eps = table[pattern]

    signs_by_cid = tpl.crossing_signs(eps)

    # actual flow direction per (cid, corner)
    def flows_in(cid, corner):
        edge = tpl.edge_of_seg[tpl.corner_seg[(cid, corner)]]
        f = tpl.flow_in[(cid, corner)]
        if eps[tpl.comp_of_edge[edge]] == -1:
            f = not f
        return f

    # orient every edge: as (from_attachment_index); build successor map in
    # the actual orientation
    attachments = tpl.attachments
    real_succ: dict[tuple, tuple] = {}
    for edge, at in attachments.items():
        if not at:
            continue
        d = tpl.edge_dir[edge]
        if eps[tpl.comp_of_edge[edge]] == -1:
            d = 1 - d
        head_cid, head_corner = at[1 - d]
        out_corner = tpl._pass_partner(head_cid, head_corner)
        real_succ[edge] = tpl.edge_of_seg[tpl.corner_seg[(head_cid, out_corner)]]

    # number edges: basepoint arc first, then remaining components
    base_edge = tpl.edge_of_seg[("bot", 0, 2)]
    number: dict[tuple, int] = {}
    nxt = 1

    def number_component(start):
        nonlocal nxt
        e = start
        while e not in number:
            number[e] = nxt
            nxt += 1
            e = real_succ[e]

    number_component(base_edge)
    for edge in sorted(e for e, at in attachments.items() if at):
        if edge not in number:
            number_component(edge)

    # crossing tuples, ordered column-by-column bottom to top
    crossings = []
    signs = []
    for cid in tpl.crossing_ids:
        i, _ = cid
        if tpl.hand[i] > 0:
            base = ("br", "tr", "tl", "bl")
        else:
            base = ("bl", "br", "tr", "tl")
        under = tpl._under_corners(cid)
        under_in = under[0] if flows_in(cid, under[0]) else under[1]
        k = base.index(under_in)
        if k == 2:
            base = base[2:] + base[:2]
        elif k != 0:
            raise AssertionError("under-in corner must sit at slot 0 or 2")
        crossings.append(tuple(
            number[tpl.edge_of_seg[tpl.corner_seg[(cid, c)]]] for c in base))
        signs.append(signs_by_cid[cid])

    n_plus = sum(1 for s in signs if s > 0)
    free = len(tpl.free_edge_classes)
    return PlanarDiagram(
        crossings=tuple(crossings),
        signs=tuple(signs),
        basepoint=number[base_edge],
        free_circles=free,
        extra_joins=(),
        components=tpl.ncomp + free,
        n_plus=n_plus,
        n_minus=len(signs) - n_plus,
        pretzel=params.twists,
        orientation=pattern,
    )
