"""Brute-force reduced Khovanov complex over the integers (even signs).

Generators are pairs (resolution state, circle labelling) with the
basepoint circle's label pinned to x; the differential applies the rank-2
Frobenius structure (1*1 = 1, 1*x = x, x*x = 0, and the dual coproduct)
along each state-cube edge, the edge flipping crossing i carrying the sign
(-1)^(number of 1-bits before i).

Gradings: h = |state| - n_minus and
q = sum over circles of (+1 for label 1, -1 for x) + 1 + |state| + n_plus
    - 2 n_minus.

Resolution convention (locked; see also the golden files): at a crossing
X(a,b,c,d), listed counterclockwise from the under-strand's incoming edge,
the 0-smoothing joins a-b and c-d and the 1-smoothing joins a-d and b-c.
For the one-crossing unknot "X(1,4,2,3)" the state [0] therefore has two
circles {1,4} and {2,3}, and the state [1] has one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .diagram import (
    DiagramError,
    PlanarDiagram,
    PretzelParams,
    build_pretzel_pd,
)
from .linalg import IntegrityError


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ResourceCapError(RuntimeError):
    """Crossing count exceeds the oracle cap; use the twist engine."""


# ---------------------------------------------------------------------------
# PD text parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"X\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)"
    r"|base=(\d+)"
    r"|circles=(\d+)"
    r"|orient=([+-]{2})"
    r"|P\(\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*\)"
    r"|[,\s]+"
)


def parse_pd(text: str) -> PlanarDiagram:
    """Parse the PD text format.

    Terms `X(a,b,c,d)` use edge labels numbered along the orientation
    (consecutively within each component, wrapping at the top).  Labels may
    appear once; the loose ends are closed by arcs joining each label's head
    to the tail of its successor.  Directives: `base=<edge>` (defaults to
    the lowest edge), `circles=<n>` for crossingless components, and the
    pretzel shorthand `P(-p,q,r)` with optional `orient=<pattern>`.
    """
    crossings: list[tuple[int, int, int, int]] = []
    term_pos: list[int] = []
    base: Optional[int] = None
    circles = 0
    pretzel_text: Optional[str] = None
    orient: Optional[str] = None

    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if re.match(r"\w+=", text[pos:]):
                raise ParseError(
                    f"unknown directive {text[pos:pos + 20].split()[0]!r}",
                    pos)
            raise ParseError(f"malformed term {text[pos:pos + 20]!r}", pos)
        if m.group(1) is not None:
            crossings.append(tuple(int(m.group(k)) for k in range(1, 5)))
            term_pos.append(pos)
        elif m.group(5) is not None:
            base = int(m.group(5))
        elif m.group(6) is not None:
            circles = int(m.group(6))
        elif m.group(7) is not None:
            orient = m.group(7)
        elif m.group(0).startswith("P("):
            pretzel_text = m.group(0)
        pos = m.end()

    if pretzel_text is not None:
        if crossings or circles:
            raise ParseError("pretzel shorthand cannot be mixed with X terms", 0)
        return build_pretzel_pd(PretzelParams.parse(pretzel_text), orient)

    if not crossings:
        if circles == 0:
            raise ParseError("empty diagram: declare circles=<n>", 0)
        return PlanarDiagram(
            crossings=(), signs=(), basepoint=None, free_circles=circles,
            components=circles, n_plus=0, n_minus=0)

    # label occurrence accounting
    occur: dict[int, list[tuple[int, int]]] = {}
    for ci, x in enumerate(crossings):
        for slot, lab in enumerate(x):
            occur.setdefault(lab, []).append((ci, slot))
    for lab, occ in occur.items():
        if len(occ) > 2:
            raise ParseError(f"edge {lab} appears {len(occ)} times",
                             term_pos[occ[2][0]])

    labels = sorted(occur)
    parent = {lab: lab for lab in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for a, b, c, d in crossings:
        union(a, c)
        union(b, d)
    once = [lab for lab in labels if len(occur[lab]) == 1]
    for lab in once:
        later = [x for x in labels if x > lab]
        union(lab, later[0] if later else labels[0])

    comp_labels: dict[int, list[int]] = {}
    for lab in labels:
        comp_labels.setdefault(find(lab), []).append(lab)
    for v in comp_labels.values():
        v.sort()

    def succ(lab: int) -> int:
        group = comp_labels[find(lab)]
        i = group.index(lab)
        return group[(i + 1) % len(group)]

    # orientations: under runs a -> c; decide the over direction per crossing
    signs = []
    head_used: dict[int, int] = {lab: 0 for lab in labels}
    tail_used: dict[int, int] = {lab: 0 for lab in labels}
    for ci, (a, b, c, d) in enumerate(crossings):
        if succ(a) != c:
            raise ParseError(
                f"under-strand numbering broken at X{crossings[ci]}: "
                f"expected successor of {a} to be {c}", term_pos[ci])
        head_used[a] += 1
        tail_used[c] += 1
        if succ(d) == b:
            signs.append(1)      # over runs d -> b
            head_used[d] += 1
            tail_used[b] += 1
        elif succ(b) == d:
            signs.append(-1)     # over runs b -> d
            head_used[b] += 1
            tail_used[d] += 1
        else:
            raise ParseError(
                f"over-strand numbering broken at X{crossings[ci]}",
                term_pos[ci])
    for lab in labels:
        if head_used[lab] > 1 or tail_used[lab] > 1:
            raise ParseError(f"edge {lab} has inconsistent direction", 0)

    # implicit closure arcs for labels appearing once
    joins = []
    for lab in labels:
        if head_used[lab] == 0:  # head is loose: close it to succ's tail
            nxt = succ(lab)
            if tail_used[nxt] != 0:
                raise ParseError(
                    f"cannot close loose edge {lab}: {nxt} has no loose tail", 0)
            joins.append((lab, nxt))

    if base is None:
        base = labels[0]
    if base not in occur:
        raise ParseError(f"basepoint edge {base} not in diagram", 0)

    n_plus = sum(1 for s in signs if s > 0)
    return PlanarDiagram(
        crossings=tuple(crossings),
        signs=tuple(signs),
        basepoint=base,
        free_circles=circles,
        extra_joins=tuple(joins),
        components=len(comp_labels) + circles,
        n_plus=n_plus,
        n_minus=len(signs) - n_plus,
    )


# ---------------------------------------------------------------------------
# Resolving states
# ---------------------------------------------------------------------------

def resolve_state(pd: PlanarDiagram, state: int | list[int]):
    """Circles of a full resolution, as sorted tuples of edge labels.

    `state` is a bitmask or 0/1 list over crossings in order.  Returns
    (circles, basepoint_index); free circles appear as ("circle", i) tokens.
    """
    if not isinstance(state, int):
        bits = list(state)
        if len(bits) != pd.n_crossings:
            raise DiagramError("state length mismatch")
        state = sum(1 << i for i, b in enumerate(bits) if b)
    circles, bp = _circle_data(pd, state)
    return circles, bp


def _circle_data(pd: PlanarDiagram, state: int):
    labels = pd.edge_labels()
    parent = {lab: lab for lab in labels}

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for i, (a, b, c, d) in enumerate(pd.crossings):
        if state >> i & 1:
            union(a, d)
            union(b, c)
        else:
            union(a, b)
            union(c, d)
    for a, b in pd.extra_joins:
        union(a, b)

    groups: dict[int, list[int]] = {}
    for lab in labels:
        groups.setdefault(find(lab), []).append(lab)
    circles = sorted((tuple(sorted(g)) for g in groups.values()))
    circles += [(("circle", i),) for i in range(pd.free_circles)]
    if pd.basepoint is not None:
        bp = next(i for i, c in enumerate(circles) if pd.basepoint in c)
    else:
        bp = next(i for i, c in enumerate(circles) if c[0] == ("circle", 0))
    return tuple(circles), bp


# ---------------------------------------------------------------------------
# The reduced complex
# ---------------------------------------------------------------------------

@dataclass
class GradedComplex:
    """Free integer chain complex with (h, q) gradings per generator.

    `gens` holds (state, labelmask) provenance; mask bit j marks the j-th
    non-basepoint circle (in sorted circle order) with label x.
    """

    gradings: list[tuple[int, int]]
    triples: list[tuple[int, int, int]]
    gens: list[tuple[int, int]]
    n_plus: int
    n_minus: int
    d_squared_checked: bool = False

    def euler_characteristic(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for h, q in self.gradings:
            out[q] = out.get(q, 0) + (-1 if h % 2 else 1)
        return {q: v for q, v in out.items() if v}

    def to_golden(self) -> str:
        """Serialize for golden-file regression tests.

        One header line, one `gen <idx> state=<s> mask=<m> h=<h> q=<q>`
        line per generator, and one `d <i> <j> <coeff>` line per sparse
        differential entry, sorted.
        """
        lines = [f"complex n_plus={self.n_plus} n_minus={self.n_minus}"]
        for i, ((h, q), (s, m)) in enumerate(zip(self.gradings, self.gens)):
            lines.append(f"gen {i} state={s} mask={m} h={h} q={q}")
        for i, j, v in sorted(self.triples):
            lines.append(f"d {i} {j} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_golden(cls, text: str) -> "GradedComplex":
        gradings, gens, triples = [], [], []
        n_plus = n_minus = 0
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "complex":
                n_plus = int(parts[1].split("=")[1])
                n_minus = int(parts[2].split("=")[1])
            elif parts[0] == "gen":
                kv = dict(p.split("=") for p in parts[2:])
                gens.append((int(kv["state"]), int(kv["mask"])))
                gradings.append((int(kv["h"]), int(kv["q"])))
            elif parts[0] == "d":
                triples.append((int(parts[1]), int(parts[2]), int(parts[3])))
        return cls(gradings, triples, gens, n_plus, n_minus)


def build_reduced_complex(
    pd: PlanarDiagram,
    pattern: Optional[str] = None,
    max_crossings: int = 20,
    check: bool = True,
) -> GradedComplex:
    """Reduced complex of a diagram; `pattern` re-orients pretzel diagrams."""
    if pattern is not None:
        if pd.pretzel is None:
            raise DiagramError("orientation patterns apply to pretzel diagrams")
        if pattern != pd.orientation:
            pd = build_pretzel_pd(PretzelParams(*pd.pretzel), pattern)
    n = pd.n_crossings
    if n > max_crossings:
        raise ResourceCapError(
            f"{n} crossings exceeds the cube cap ({max_crossings}); "
            "use the twist engine")

    n_plus, n_minus = pd.n_plus, pd.n_minus

    # per-state circle data
    states = range(1 << n)
    circ: list[tuple] = [None] * (1 << n)
    bp_of: list[int] = [0] * (1 << n)
    nonbp_count: list[int] = [0] * (1 << n)
    offsets: list[int] = [0] * ((1 << n) + 1)
    for s in states:
        cs, bp = _circle_data(pd, s)
        circ[s] = cs
        bp_of[s] = bp
        nonbp_count[s] = len(cs) - 1
        offsets[s + 1] = offsets[s] + (1 << (len(cs) - 1))
    total = offsets[1 << n]

    gradings: list[tuple[int, int]] = [None] * total
    gens: list[tuple[int, int]] = [None] * total
    base_q = n_plus - 2 * n_minus
    for s in states:
        c = nonbp_count[s] + 1
        w = bin(s).count("1")
        h = w - n_minus
        q0 = c - 1 + w + base_q  # mask of all-1 labels
        off = offsets[s]
        for mask in range(1 << (c - 1)):
            q = q0 - 2 * bin(mask).count("1")
            gradings[off + mask] = (h, q)
            gens[off + mask] = (s, mask)

    triples: list[tuple[int, int, int]] = []
    append = triples.append

    for s in states:
        cs = circ[s]
        bp = bp_of[s]
        nonbp = [i for i in range(len(cs)) if i != bp]
        pos_of = {ci: k for k, ci in enumerate(nonbp)}
        w_off = offsets[s]
        for i in range(n):
            if s >> i & 1:
                continue
            t = s | (1 << i)
            sign = -1 if bin(s & ((1 << i) - 1)).count("1") % 2 else 1
            ct = circ[t]
            bpt = bp_of[t]
            nonbp_t = [k for k in range(len(ct)) if k != bpt]
            pos_t = {ci: k for k, ci in enumerate(nonbp_t)}
            set_t = {frozenset(c): k for k, c in enumerate(ct)}
            edges_i = set(pd.crossings[i])
            parts_s = [k for k, c in enumerate(cs) if edges_i & set(c)]
            parts_t = [k for k, c in enumerate(ct) if edges_i & set(c)]
            if len(parts_s) == 2 and len(parts_t) == 1:
                kind = "merge"
            elif len(parts_s) == 1 and len(parts_t) == 2:
                kind = "split"
            else:
                raise IntegrityError(
                    f"crossing {i}: resolution change is neither a merge "
                    f"nor a split (diagram is not planar?)")
            # mask positions of untouched circles carry over by identity
            perm = []
            for k in nonbp:
                if k in parts_s:
                    continue
                perm.append((pos_of[k], pos_t[set_t[frozenset(cs[k])]]))
            t_off = offsets[t]

            if kind == "merge":
                ka, kb = parts_s
                kc = parts_t[0]
                bp_in = bp in (ka, kb)
                if bp_in:
                    knb = kb if ka == bp else ka
                    pa = pos_of[knb]
                    for mask in range(1 << len(nonbp)):
                        if mask >> pa & 1:
                            continue  # x merges into the basepoint circle: x*x = 0
                        out = 0
                        for ps, pt in perm:
                            if mask >> ps & 1:
                                out |= 1 << pt
                        append((w_off + mask, t_off + out, sign))
                else:
                    pa, pb = pos_of[ka], pos_of[kb]
                    pc = pos_t[kc]
                    for mask in range(1 << len(nonbp)):
                        la = mask >> pa & 1
                        lb = mask >> pb & 1
                        if la and lb:
                            continue
                        out = (la | lb) << pc
                        for ps, pt in perm:
                            if mask >> ps & 1:
                                out |= 1 << pt
                        append((w_off + mask, t_off + out, sign))
            else:
                kc = parts_s[0]
                ka, kb = parts_t
                if kc == bp:
                    # x -> x (x) x; the non-basepoint part gets an x
                    if bpt not in (ka, kb):
                        raise IntegrityError("basepoint lost across a split")
                    knb = ka if bpt == kb else kb
                    pn = pos_t[knb]
                    for mask in range(1 << len(nonbp)):
                        out = 1 << pn
                        for ps, pt in perm:
                            if mask >> ps & 1:
                                out |= 1 << pt
                        append((w_off + mask, t_off + out, sign))
                else:
                    pc = pos_of[kc]
                    pa, pb = pos_t[ka], pos_t[kb]
                    for mask in range(1 << len(nonbp)):
                        base_out = 0
                        for ps, pt in perm:
                            if mask >> ps & 1:
                                base_out |= 1 << pt
                        if mask >> pc & 1:
                            append((w_off + mask,
                                    t_off + (base_out | 1 << pa | 1 << pb),
                                    sign))
                        else:
                            append((w_off + mask, t_off + (base_out | 1 << pa),
                                    sign))
                            append((w_off + mask, t_off + (base_out | 1 << pb),
                                    sign))

    cx = GradedComplex(gradings, triples, gens, n_plus, n_minus)
    if check:
        _check_d_squared(cx)
        cx.d_squared_checked = True
    return cx


def _check_d_squared(cx: GradedComplex) -> None:
    if len(cx.triples) > 50000:
        try:
            _check_d_squared_numpy(cx)
            return
        except ImportError:
            pass
    by_src: dict[int, list[tuple[int, int]]] = {}
    for i, j, v in cx.triples:
        by_src.setdefault(i, []).append((j, v))
    for i, out in by_src.items():
        acc: dict[int, int] = {}
        for j, v in out:
            for k, w in by_src.get(j, ()):
                acc[k] = acc.get(k, 0) + v * w
        for k, tot in acc.items():
            if tot:
                raise IntegrityError(
                    f"d*d != 0 from generator {i} to {k} (coefficient {tot})")


def _check_d_squared_numpy(cx: GradedComplex) -> None:
    # entries and composite sums are small, so int64 arithmetic is exact
    import numpy as np

    n = len(cx.gradings)
    tri = np.asarray(cx.triples, dtype=np.int64)
    src, dst, val = tri[:, 0], tri[:, 1], tri[:, 2]
    order = np.argsort(src, kind="stable")
    src_s, dst_s, val_s = src[order], dst[order], val[order]
    starts = np.searchsorted(src_s, dst, side="left")
    stops = np.searchsorted(src_s, dst, side="right")
    counts = stops - starts
    total = int(counts.sum())
    if total == 0:
        return
    first_i = np.repeat(src, counts)
    first_v = np.repeat(val, counts)
    cum = np.cumsum(counts)
    gather = (np.repeat(starts, counts)
              + np.arange(total) - np.repeat(cum - counts, counts))
    comp_k = dst_s[gather]
    comp_v = first_v * val_s[gather]
    keys = first_i * n + comp_k
    korder = np.argsort(keys, kind="stable")
    keys = keys[korder]
    comp_v = comp_v[korder]
    seg = np.concatenate(([0], np.nonzero(np.diff(keys))[0] + 1))
    sums = np.add.reduceat(comp_v, seg)
    bad = np.nonzero(sums)[0]
    if len(bad):
        i, k = divmod(int(keys[seg[bad[0]]]), n)
        raise IntegrityError(
            f"d*d != 0 from generator {i} to {k} "
            f"(coefficient {int(sums[bad[0]])})")
