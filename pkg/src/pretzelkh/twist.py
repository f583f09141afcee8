"""Fast route: simplified twist-strand complexes glued into a small cube.

A positive n-half-twist 2-strand tangle has a complex with n+1 objects:
the parallel smoothing, then n cap-cup smoothings, connected by one saddle
and n-1 dotted-identity maps.  The dotted maps alternate between the
difference and the sum of the two single-dot identity cobordisms, the
unique alternation killing consecutive composites under the local relation
"two dots on a component = 0"; the cup coefficient of the last map is -1
for n even and +1 for n odd.  Mirroring gives the negative-twist complex
(dotted maps first, saddle last); its global edge signs are fixed here so
that the composite with the terminal saddle vanishes.

Gluing the three strand complexes of P(-p, q, r) produces a cube of
(p+1)(q+1)(r+1) closed crossingless diagrams whose total complex (with
standard triple-complex signs) is homotopy equivalent to the full
resolution cube but exponentially smaller.  Delooping every node over the
basepoint turns it into a free complex, and Gaussian elimination of unit
differential entries reduces it to homology size.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Optional

from .diagram import crossing_counts, knot_orientation_pattern
from .linalg import HomologyTable, IntegrityError, homology


# ---------------------------------------------------------------------------
# Single-strand twist complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TwistComplex:
    """Simplified complex of an n-half-twist 2-strand tangle.

    objects[i] is "I" (two parallel strands) or "H" (cap over cup).
    maps[i] goes from object i to object i+1 and is either ("saddle",)
    or ("dot", cap_coeff, cup_coeff).
    """

    n: int
    sign: int
    objects: tuple[str, ...]
    maps: tuple[tuple, ...]
    terminal_sign: int


def twist_complex(n: int, sign: int) -> TwistComplex:
    if n < 1:
        raise ValueError("need at least one half-twist")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    terminal = 1 if n % 2 else -1
    if sign > 0:
        objects = ("I",) + ("H",) * n
        maps = [("saddle",)]
        for i in range(1, n):
            maps.append(("dot", 1, (-1) ** i))
    else:
        objects = ("H",) * n + ("I",)
        maps = []
        for a in range(n - 1):
            maps.append(("dot", 1, (-1) ** (a + n + 1)))
        maps.append(("saddle",))
    return TwistComplex(n, sign, objects, tuple(maps), terminal)


def compose_dot_maps(m1: tuple, m2: tuple) -> dict:
    """Symbolic composite of two dotted-identity maps (m2 after m1).

    Works in the dotted cobordism algebra of the cap-cup tangle: a dot
    squared on either sheet vanishes, dots on different sheets commute.
    Returns {(sheets...): coefficient} with zero entries dropped.
    """
    out: dict[tuple, int] = {}
    for s1, c1 in (("cap", m1[1]), ("cup", m1[2])):
        for s2, c2 in (("cap", m2[1]), ("cup", m2[2])):
            if s1 == s2:
                continue  # two dots on one sheet vanish
            key = tuple(sorted((s1, s2)))
            out[key] = out.get(key, 0) + c1 * c2
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# Cube nodes: closed crossingless diagrams from glued tangle smoothings
# ---------------------------------------------------------------------------

_BASEPOINT_TOKEN = ("b", 0, 2)

_CLOSURE_ENDS = {
    ("t", 0, 1): (("TR", 0), ("TL", 1)),
    ("t", 1, 2): (("TR", 1), ("TL", 2)),
    ("t", 0, 2): (("TL", 0), ("TR", 2)),
    ("b", 0, 1): (("BR", 0), ("BL", 1)),
    ("b", 1, 2): (("BR", 1), ("BL", 2)),
    ("b", 0, 2): (("BL", 0), ("BR", 2)),
}


def _node_circles(types: tuple[str, str, str]):
    """Circles of the closed diagram with the given smoothing per strand.

    Returns (circles, bp_index) where circles is a sorted tuple of
    frozensets of arc tokens and bp_index marks the basepoint circle.
    """
    token_ends = dict(_CLOSURE_ENDS)
    for i, t in enumerate(types):
        if t == "I":
            token_ends[("L", i)] = (("TL", i), ("BL", i))
            token_ends[("R", i)] = (("TR", i), ("BR", i))
        else:
            token_ends[("cap", i)] = (("TL", i), ("TR", i))
            token_ends[("cup", i)] = (("BL", i), ("BR", i))

    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for tok, (e1, e2) in token_ends.items():
        for e in (e1, e2):
            parent.setdefault(e, e)
    for tok, (e1, e2) in token_ends.items():
        ra, rb = find(e1), find(e2)
        if ra != rb:
            parent[rb] = ra

    groups: dict = {}
    for tok, (e1, _) in token_ends.items():
        groups.setdefault(find(e1), []).append(tok)
    circles = tuple(sorted((frozenset(g) for g in groups.values()),
                           key=lambda s: sorted(map(str, s))))
    bp = next(i for i, c in enumerate(circles) if _BASEPOINT_TOKEN in c)
    return circles, bp


_NODE_CACHE: dict[tuple, tuple] = {}


def _node(types):
    if types not in _NODE_CACHE:
        _NODE_CACHE[types] = _node_circles(types)
    return _NODE_CACHE[types]


_DOT_CACHE: dict[tuple, tuple] = {}


def _dot_circles(types, strand):
    """(cap circle index, cup circle index, basepoint index) for a strand."""
    key = (types, strand)
    if key not in _DOT_CACHE:
        circles, bp = _node(types)
        cap = next(i for i, c in enumerate(circles) if ("cap", strand) in c)
        cup = next(i for i, c in enumerate(circles) if ("cup", strand) in c)
        _DOT_CACHE[key] = (cap, cup, bp)
    return _DOT_CACHE[key]


_SADDLE_CACHE: dict[tuple, dict] = {}


def _saddle_structure(src_types, strand):
    """Circle-index data of the saddle on `strand` leaving `src_types`.

    Depends only on the smoothing types, so it is shared by every parallel
    edge of the cube.  Returns positions of non-basepoint circles on both
    sides, the identity matching `perm`, and the merge/split participants.
    """
    key = (src_types, strand)
    if key in _SADDLE_CACHE:
        return _SADDLE_CACHE[key]
    dst_types = list(src_types)
    dst_types[strand] = "I" if src_types[strand] == "H" else "H"
    dst_types = tuple(dst_types)
    s_circles, s_bp = _node(src_types)
    t_circles, t_bp = _node(dst_types)
    s_nonbp = [i for i in range(len(s_circles)) if i != s_bp]
    t_nonbp = [i for i in range(len(t_circles)) if i != t_bp]
    s_pos = {ci: k for k, ci in enumerate(s_nonbp)}
    t_pos = {ci: k for k, ci in enumerate(t_nonbp)}

    def core(circ):
        return frozenset(t for t in circ if len(t) != 2 or t[1] != strand)

    t_core = {core(c): i for i, c in enumerate(t_circles)}
    s_parts = [i for i, c in enumerate(s_circles)
               if any(len(t) == 2 and t[1] == strand for t in c)]
    t_parts = [i for i, c in enumerate(t_circles)
               if any(len(t) == 2 and t[1] == strand for t in c)]
    perm = []
    for i, c in enumerate(s_circles):
        if i in s_parts or i == s_bp:
            continue
        perm.append((s_pos[i], t_pos[t_core[core(c)]]))
    if s_bp not in s_parts and t_core[core(s_circles[s_bp])] != t_bp:
        raise IntegrityError("basepoint circle not preserved")
    data = {
        "k_src": len(s_nonbp),
        "perm": tuple(perm),
        "s_parts": tuple(s_parts),
        "t_parts": tuple(t_parts),
        "s_bp": s_bp,
        "t_bp": t_bp,
        "s_pos": s_pos,
        "t_pos": t_pos,
    }
    _SADDLE_CACHE[key] = data
    return data


@dataclass(frozen=True)
class CubeEdge:
    src: tuple[int, int, int]
    dst: tuple[int, int, int]
    strand: int
    kind: str                      # "saddle" or "dot"
    dot_terms: tuple[tuple[int, int], ...]   # (source circle index, coeff)
    zeroed_terms: tuple[tuple[int, int], ...]  # dots killed by the basepoint
    koszul: int


@dataclass
class TwistCube:
    """Cube of closed crossingless diagrams for P(-p, q, r)."""

    p: int
    q: int
    r: int
    nodes: dict[tuple[int, int, int], tuple]   # coords -> (circles, bp)
    edges: list[CubeEdge]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def describe(self) -> str:
        """Plain-text dump of nodes and edges, for eyeballing small cubes."""
        lines = [f"twist cube P(-{self.p},{self.q},{self.r}): "
                 f"{self.node_count} nodes"]
        for coords in sorted(self.nodes):
            circles, bp = self.nodes[coords]
            lines.append(f"node {coords}: {len(circles)} circles "
                         f"(basepoint #{bp})")
        for e in sorted(self.edges, key=lambda e: (e.src, e.strand)):
            if e.kind == "saddle":
                label = "saddle"
            elif e.dot_terms:
                label = "dot " + " ".join(
                    f"{c:+d}*circle{i}" for i, c in e.dot_terms)
            else:
                label = "0 (dot on basepoint)"
            lines.append(f"edge {e.src} -> {e.dst} [strand {e.strand}, "
                         f"koszul {e.koszul:+d}]: {label}")
        return "\n".join(lines) + "\n"


def _strand_type(strand: int, pos: int, dims: tuple[int, int, int]) -> str:
    if strand == 0:
        return "I" if pos == dims[0] else "H"
    return "I" if pos == 0 else "H"


def _strand_map(strand: int, pos: int, dims: tuple[int, int, int]):
    """Map from strand position `pos` to `pos + 1` within one strand complex."""
    n = dims[strand]
    if strand == 0:
        if pos == n - 1:
            return ("saddle",)
        return ("dot", 1, (-1) ** (pos + n + 1))
    if pos == 0:
        return ("saddle",)
    return ("dot", 1, (-1) ** pos)


def build_twist_cube(p: int, q: int, r: int) -> TwistCube:
    if min(p, q, r) < 1:
        raise ValueError("twist counts must be positive")
    dims = (p, q, r)
    nodes = {}
    for coords in itertools.product(range(p + 1), range(q + 1), range(r + 1)):
        types = tuple(_strand_type(s, coords[s], dims) for s in range(3))
        nodes[coords] = _node(types)

    edges = []
    for coords in nodes:
        a, b, c = coords
        types = tuple(_strand_type(s, coords[s], dims) for s in range(3))
        for strand in range(3):
            if coords[strand] >= dims[strand]:
                continue
            dst = list(coords)
            dst[strand] += 1
            dst = tuple(dst)
            koszul = 1 if strand == 0 else (
                (-1) ** a if strand == 1 else (-1) ** (a + b))
            m = _strand_map(strand, coords[strand], dims)
            if m[0] == "saddle":
                edges.append(CubeEdge(coords, dst, strand, "saddle", (), (),
                                      koszul))
            else:
                cap, cup, bp = _dot_circles(types, strand)
                live = []
                dead = []
                for ci, coeff in ((cap, m[1]), (cup, m[2])):
                    (dead if ci == bp else live).append((ci, coeff))
                edges.append(CubeEdge(coords, dst, strand, "dot",
                                      tuple(live), tuple(dead), koszul))
    return TwistCube(p, q, r, nodes, edges)


# ---------------------------------------------------------------------------
# Delooping the cube into a free complex
# ---------------------------------------------------------------------------

@dataclass
class FreeComplex:
    """Free graded complex with provenance back to cube nodes."""

    gradings: list[tuple[int, int]]
    gens: list[tuple[tuple[int, int, int], int]]   # (node coords, label mask)
    out: dict[int, dict[int, int]]
    d_squared_checked: bool = False

    @property
    def triples(self):
        return [(i, j, v) for i, row in self.out.items()
                for j, v in row.items() if v]

    def size(self) -> int:
        return len(self.gradings)

    def euler_characteristic(self) -> dict[int, int]:
        acc: dict[int, int] = {}
        for h, q in self.gradings:
            acc[q] = acc.get(q, 0) + (-1 if h % 2 else 1)
        return {q: v for q, v in acc.items() if v}


def _node_q_shift(coords, dims, n_plus, n_minus) -> int:
    a, b, c = coords
    p = dims[0]
    f_p = 2 * a if a < p else 2 * p - 1
    f_q = 0 if b == 0 else 2 * b - 1
    f_r = 0 if c == 0 else 2 * c - 1
    q_000 = 1 - p + n_plus - 2 * n_minus
    return q_000 + f_p + f_q + f_r


def to_free_complex(cube: TwistCube, pattern: str) -> FreeComplex:
    """Deloop every cube node (basepoint circle pinned to x) and assemble
    the differential; gradings are anchored so the top node's doubly-dotted
    generator sits at h = p - n_minus, q = -2 + p + n_plus - 2 n_minus."""
    dims = (cube.p, cube.q, cube.r)
    n_plus, n_minus = crossing_counts(pattern, cube.p, cube.q, cube.r)

    coords_list = sorted(cube.nodes)
    offsets = {}
    gradings: list[tuple[int, int]] = []
    gens: list[tuple[tuple[int, int, int], int]] = []
    pos = 0
    for coords in coords_list:
        circles, bp = cube.nodes[coords]
        k = len(circles) - 1
        offsets[coords] = pos
        h = sum(coords) - n_minus
        q_node = _node_q_shift(coords, dims, n_plus, n_minus)
        for mask in range(1 << k):
            ones = bin(mask).count("1")
            gradings.append((h, q_node + (k - ones) - ones))
            gens.append((coords, mask))
            pos += 1

    out: dict[int, dict[int, int]] = {i: {} for i in range(pos)}

    def add(i, j, v):
        row = out[i]
        nv = row.get(j, 0) + v
        if nv:
            row[j] = nv
        elif j in row:
            del row[j]

    for edge in cube.edges:
        s_off = offsets[edge.src]
        t_off = offsets[edge.dst]
        src_types = tuple(_strand_type(s, edge.src[s], dims)
                          for s in range(3))

        if edge.kind == "dot":
            # same node diagram on both sides; positions correspond 1:1
            circles, bp = cube.nodes[edge.src]
            nonbp = [i for i in range(len(circles)) if i != bp]
            pos = {ci: k for k, ci in enumerate(nonbp)}
            k_src = len(nonbp)
            for ci, coeff in edge.dot_terms:
                bit = 1 << pos[ci]
                for mask in range(1 << k_src):
                    if mask & bit:
                        continue
                    add(s_off + mask, t_off + (mask | bit),
                        coeff * edge.koszul)
            continue

        st = _saddle_structure(src_types, edge.strand)
        k_src = st["k_src"]
        perm = st["perm"]
        s_parts, t_parts = st["s_parts"], st["t_parts"]
        s_bp, t_bp = st["s_bp"], st["t_bp"]
        s_pos, t_pos = st["s_pos"], st["t_pos"]

        if len(s_parts) == 2 and len(t_parts) == 1:
            ka, kb = s_parts
            if s_bp in s_parts:
                other = kb if ka == s_bp else ka
                pa = s_pos[other]
                for mask in range(1 << k_src):
                    if mask >> pa & 1:
                        continue
                    new = 0
                    for ps, pt in perm:
                        if mask >> ps & 1:
                            new |= 1 << pt
                    add(s_off + mask, t_off + new, edge.koszul)
            else:
                pa, pb = s_pos[ka], s_pos[kb]
                pc = t_pos[t_parts[0]]
                for mask in range(1 << k_src):
                    la = mask >> pa & 1
                    lb = mask >> pb & 1
                    if la and lb:
                        continue
                    new = (la | lb) << pc
                    for ps, pt in perm:
                        if mask >> ps & 1:
                            new |= 1 << pt
                    add(s_off + mask, t_off + new, edge.koszul)
        elif len(s_parts) == 1 and len(t_parts) == 2:
            kc = s_parts[0]
            ka, kb = t_parts
            if kc == s_bp:
                if t_bp not in t_parts:
                    raise IntegrityError("basepoint lost across a split")
                other = ka if t_bp == kb else kb
                pn = t_pos[other]
                for mask in range(1 << k_src):
                    new = 1 << pn
                    for ps, pt in perm:
                        if mask >> ps & 1:
                            new |= 1 << pt
                    add(s_off + mask, t_off + new, edge.koszul)
            else:
                pc = s_pos[kc]
                pa, pb = t_pos[ka], t_pos[kb]
                for mask in range(1 << k_src):
                    new0 = 0
                    for ps, pt in perm:
                        if mask >> ps & 1:
                            new0 |= 1 << pt
                    if mask >> pc & 1:
                        add(s_off + mask,
                            t_off + (new0 | 1 << pa | 1 << pb), edge.koszul)
                    else:
                        add(s_off + mask, t_off + (new0 | 1 << pa),
                            edge.koszul)
                        add(s_off + mask, t_off + (new0 | 1 << pb),
                            edge.koszul)
        else:
            raise IntegrityError(
                f"saddle on strand {edge.strand} at {edge.src} is neither a "
                "merge nor a split")

    cx = FreeComplex(gradings, gens, out)
    _check_square(cx)
    cx.d_squared_checked = True
    return cx


def _check_square(cx: FreeComplex) -> None:
    for i, row in cx.out.items():
        acc: dict[int, int] = {}
        for j, v in row.items():
            for k, w in cx.out.get(j, {}).items():
                acc[k] = acc.get(k, 0) + v * w
        for k, tot in acc.items():
            if tot:
                raise IntegrityError(
                    f"d*d != 0 between generators {cx.gens[i]} and "
                    f"{cx.gens[k]} (coefficient {tot})")


# ---------------------------------------------------------------------------
# Gaussian elimination of unit differential entries
# ---------------------------------------------------------------------------

def gaussian_eliminate(cx: FreeComplex) -> FreeComplex:
    """Cancel generator pairs joined by a +-1 entry until none remain.

    Every cancellation applies the zig-zag correction (subtract
    c * a^{-1} * b around the removed pair), so homology is preserved.
    Pivots are taken lowest homological grading first, then smallest
    source and target index, which makes the result deterministic.
    """
    out = {i: dict(row) for i, row in cx.out.items()}
    inn: dict[int, dict[int, int]] = {i: {} for i in out}
    for i, row in out.items():
        for j, v in row.items():
            inn[j][i] = v
    alive = set(out)

    heap = []
    for i, row in out.items():
        h = cx.gradings[i][0]
        for j, v in row.items():
            if v == 1 or v == -1:
                heapq.heappush(heap, (h, i, j))

    while heap:
        h, g1, g2 = heapq.heappop(heap)
        if g1 not in alive or g2 not in alive:
            continue
        a = out[g1].get(g2, 0)
        if a != 1 and a != -1:
            continue
        ins = [(i, v) for i, v in inn[g2].items() if i != g1]
        outs = [(k, v) for k, v in out[g1].items() if k != g2]
        # detach g1 and g2
        for j, _ in out[g1].items():
            if j != g2:
                del inn[j][g1]
        for i, _ in inn[g1].items():
            del out[i][g1]
        for j, _ in out[g2].items():
            del inn[j][g2]
        for i, v in ins:
            del out[i][g2]
        alive.discard(g1)
        alive.discard(g2)
        del out[g1], inn[g1], out[g2], inn[g2]
        for i, b in ins:
            row = out[i]
            hi = cx.gradings[i][0]
            for k, c in outs:
                nv = row.get(k, 0) - c * a * b
                if nv:
                    row[k] = nv
                    inn[k][i] = nv
                    if nv == 1 or nv == -1:
                        heapq.heappush(heap, (hi, i, k))
                else:
                    row.pop(k, None)
                    inn[k].pop(i, None)

    order = sorted(alive)
    remap = {g: i for i, g in enumerate(order)}
    new_out = {remap[g]: {remap[j]: v for j, v in out[g].items()}
               for g in order}
    reduced = FreeComplex(
        [cx.gradings[g] for g in order],
        [cx.gens[g] for g in order],
        new_out,
    )
    reduced.d_squared_checked = cx.d_squared_checked
    return reduced


# ---------------------------------------------------------------------------
# Signed path counts on the wall/floor grid
# ---------------------------------------------------------------------------

def _start_cell(wall: str, idx: int):
    if wall == "north":
        return 0, idx, "y"
    if wall == "east":
        return idx, 0, "x"
    raise ValueError("wall must be 'north' or 'east'")


def path_sign(p: int, q: int, r: int, start, steps) -> int:
    """Sign of one admissible path, given its horizontal step directions.

    `start` = (wall, index, height); `steps` is a string over {x, y} of
    length height + 1 whose first letter is forced by the wall.  Each step
    at level a from row b contributes (-1)^(a + b).
    """
    wall, idx, height = start
    b, c, first = _start_cell(wall, idx)
    if len(steps) != height + 1:
        raise ValueError("need height + 1 horizontal steps")
    if steps[0] != first:
        raise ValueError(f"paths off the {wall} wall start with {first!r}")
    sign = 1
    level = height
    for s in steps:
        sign *= -1 if (level + b) % 2 else 1
        if s == "y":
            b += 1
        else:
            c += 1
        if not (1 <= b <= q and 1 <= c <= r):
            raise ValueError("path leaves the floor grid")
        level -= 1
    return sign


def signed_path_count(p: int, q: int, r: int, start, end) -> int:
    """Signed number of admissible zig-zag paths from a wall generator to a
    floor cell.

    `start` is (wall, index, height) with wall "north" (cells (0, c),
    paths leave in the +b direction) or "east" (cells (b, 0), paths leave
    in the +c direction); height is the cube level, at most p.  `end` is a
    floor cell (b, c), 1 <= b <= q, 1 <= c <= r.  A path alternates
    positive horizontal unit steps with downward level steps, one
    horizontal step per level from `height` down to 0.  Each step at level
    a starting from row b contributes a factor (-1)^(a + b); the product
    over the path is its sign.
    """
    wall, idx, height = start
    if height < 0 or height > p:
        raise ValueError("height must lie between 0 and the wall height")
    eb, ec = end
    if not (1 <= eb <= q and 1 <= ec <= r):
        raise ValueError("end must be an interior floor cell")
    b0, c0, first = _start_cell(wall, idx)

    total = 0

    def walk(b, c, level, sign, step_dir):
        nonlocal total
        if step_dir == "y":
            nb, nc = b + 1, c
        else:
            nb, nc = b, c + 1
        if not (1 <= nb <= q and 1 <= nc <= r):
            return
        sign = sign * (-1 if (level + b) % 2 else 1)
        if level == 0:
            if (nb, nc) == (eb, ec):
                total += sign
            return
        if abs(nb - eb) + abs(nc - ec) > level:
            return
        walk(nb, nc, level - 1, sign, "y")
        walk(nb, nc, level - 1, sign, "x")

    walk(b0, c0, height, 1, first)
    return total


# ---------------------------------------------------------------------------
# End-to-end fast homology
# ---------------------------------------------------------------------------

def fast_homology(p: int, q: int, r: int,
                  pattern: Optional[str] = None) -> HomologyTable:
    """Reduced integer homology of P(-p, q, r) via the twist cube."""
    if pattern is None:
        pattern = knot_orientation_pattern(p, q, r)
    cube = build_twist_cube(p, q, r)
    cx = to_free_complex(cube, pattern)
    reduced = gaussian_eliminate(cx)
    return homology(reduced)
