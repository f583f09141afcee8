"""Exact sparse integer linear algebra: Smith normal form and graded homology.

All arithmetic uses Python's arbitrary-precision integers; intermediate
entries are never truncated.  The Smith normal form routine clears unit
pivots first (choosing low fill-in), which keeps the matrices arising from
resolution cubes small, and only then runs the classical algorithm on the
remaining core.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from math import gcd


class IntegrityError(RuntimeError):
    """A chain-complex contract was violated (d*d != 0 or bad gradings)."""


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_triples(cls, rows, cols, triples):
        acc = {}
        for r, c, v in triples:
            if not (0 <= r < rows and 0 <= c < cols):
                raise ValueError("entry out of range")
            acc[(r, c)] = acc.get((r, c), 0) + v
        ents = tuple(sorted((r, c, v) for (r, c), v in acc.items() if v))
        return cls(rows, cols, ents)

    def to_dense(self):
        m = [[0] * self.cols for _ in range(self.rows)]
        for r, c, v in self.entries:
            m[r][c] = v
        return m


def _unit_sweep(row_data, col_index):
    """Clear +-1 pivots by unimodular row/column operations.

    row_data: dict row -> dict col -> value.  col_index: dict col -> set of
    rows.  Mutates both; returns the number of pivots cleared.  Zero
    fill-in pivots (alone in their row or column) are peeled first through
    a cheap queue; the rest go through a Markowitz-cost heap.
    """
    from collections import deque

    queue = deque(row_data)
    queued = set(queue)
    rank = 0
    while queue:
        r = queue.popleft()
        queued.discard(r)
        row = row_data.get(r)
        if not row:
            continue
        # pick the unit entry whose column is emptiest (Markowitz-lite)
        c = None
        best = None
        for c2, v2 in row.items():
            if v2 == 1 or v2 == -1:
                deg = len(col_index[c2])
                if best is None or deg < best:
                    best = deg
                    c = c2
                    if deg == 1:
                        break
        if c is None:
            continue  # no unit pivot in this row right now
        v = row[c]
        rank += 1
        pivot_row = dict(row)
        # clear column c in every other row
        for r2 in list(col_index[c]):
            if r2 == r:
                continue
            row2 = row_data[r2]
            f = row2[c] * v  # v is its own inverse
            for c2, pv in pivot_row.items():
                old = row2.get(c2)
                if old is None:
                    row2[c2] = -f * pv
                    col_index[c2].add(r2)
                else:
                    nv = old - f * pv
                    if nv:
                        row2[c2] = nv
                    else:
                        del row2[c2]
                        col_index[c2].discard(r2)
            if not row2:
                del row_data[r2]
            elif r2 not in queued:
                queue.append(r2)
                queued.add(r2)
        # remove the pivot row and column entirely (column ops on the rest of
        # the pivot row are unimodular and touch no other row)
        for c2 in pivot_row:
            col_index[c2].discard(r)
        del row_data[r]
        col_index.pop(c, None)
    return rank


def _classic_snf(dense):
    """Invariant factors of a small dense integer matrix."""
    m = [row[:] for row in dense]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    factors = []
    top = 0
    while True:
        pivot = None
        best = None
        for i in range(top, nr):
            for j in range(top, nc):
                v = m[i][j]
                if v:
                    key = abs(v)
                    if best is None or key < best:
                        best = key
                        pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        m[top], m[i0] = m[i0], m[top]
        for row in m:
            row[top], row[j0] = row[j0], row[top]
        while True:
            # clear column
            changed = False
            for i in range(top + 1, nr):
                if m[i][top]:
                    qt = m[i][top] // m[top][top]
                    if qt:
                        for j in range(top, nc):
                            m[i][j] -= qt * m[top][j]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        changed = True
            if any(m[i][top] for i in range(top + 1, nr)):
                continue
            # clear row
            for j in range(top + 1, nc):
                if m[top][j]:
                    qt = m[top][j] // m[top][top]
                    if qt:
                        for i in range(top, nr):
                            m[i][j] -= qt * m[i][top]
                    if m[top][j]:
                        for row in m:
                            row[top], row[j] = row[j], row[top]
                        changed = True
            if any(m[top][j] for j in range(top + 1, nc)):
                continue
            if not changed:
                break
        # divisibility: pivot must divide every remaining entry
        d = m[top][top]
        offender = None
        for i in range(top + 1, nr):
            for j in range(top + 1, nc):
                if m[i][j] % d:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            for j in range(top, nc):
                m[top][j] += m[offender][j]
            continue
        factors.append(abs(d))
        top += 1
        if top >= nr or top >= nc:
            break
    # enforce the divisibility chain
    for i in range(len(factors)):
        for j in range(i + 1, len(factors)):
            a, b = factors[i], factors[j]
            g = gcd(a, b)
            factors[i], factors[j] = g, a * b // g
    return factors


def _snf_core(row_data, col_index) -> tuple[tuple[int, ...], int]:
    units = _unit_sweep(row_data, col_index)
    if not row_data:
        core_factors = []
    else:
        rows = sorted(row_data)
        cols = sorted({c for row in row_data.values() for c in row})
        cpos = {c: j for j, c in enumerate(cols)}
        dense = [[0] * len(cols) for _ in rows]
        for i, r in enumerate(rows):
            for c, v in row_data[r].items():
                dense[i][cpos[c]] = v
        core_factors = _classic_snf(dense)
    factors = [1] * units + core_factors
    factors.sort()
    return tuple(factors), len(factors)


def smith_normal_form(matrix: SparseIntMatrix) -> tuple[tuple[int, ...], int]:
    """Invariant factors d1 | d2 | ... and the rank of an integer matrix."""
    row_data: dict[int, dict[int, int]] = defaultdict(dict)
    col_index: dict[int, set] = defaultdict(set)
    for r, c, v in matrix.entries:
        row_data[r][c] = v
        col_index[c].add(r)
    return _snf_core(row_data, col_index)


def _rank_only(row_data, col_index):
    """Rank of the remaining matrix after the unit sweep, exactly."""
    units = _unit_sweep(row_data, col_index)
    if not row_data:
        return units
    rows = sorted(row_data)
    cols = sorted({c for row in row_data.values() for c in row})
    cpos = {c: j for j, c in enumerate(cols)}
    dense = [[0] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for c, v in row_data[r].items():
            dense[i][cpos[c]] = v
    return units + len(_classic_snf(dense))


@dataclass
class HomologyTable:
    """Map (homological, quantum) grading -> (free rank, torsion orders)."""

    groups: dict[tuple[int, int], tuple[int, tuple[int, ...]]]

    def __post_init__(self):
        self.groups = {
            hq: (rk, tuple(sorted(tor)))
            for hq, (rk, tor) in self.groups.items()
            if rk or tor
        }

    def __eq__(self, other):
        return isinstance(other, HomologyTable) and self.groups == other.groups

    def free_rank(self) -> int:
        return sum(rk for rk, _ in self.groups.values())

    def torsion(self) -> list[int]:
        out = []
        for _, tor in self.groups.values():
            out.extend(tor)
        return sorted(out)

    def poincare_items(self) -> list[tuple[int, int, int]]:
        """(q-exponent, h-exponent, rank) triples, sorted."""
        return sorted((q, h, rk) for (h, q), (rk, _) in self.groups.items())

    def sorted_items(self):
        return sorted(self.groups.items())


def delta_collapse(table: HomologyTable) -> dict[int, int]:
    """Collapse to the diagonal grading, keyed by the integer 2*delta = q - 2h.

    Torsion is not folded in; use table.torsion() to inspect it (expected
    empty for every link this engine computes).
    """
    out: dict[int, int] = {}
    for (h, q), (rk, _) in table.groups.items():
        if rk:
            key = q - 2 * h
            out[key] = out.get(key, 0) + rk
    return out


def homology(complex_obj) -> HomologyTable:
    """Integer homology of a graded complex, blockwise per (h, q).

    `complex_obj` needs `gradings` (sequence of (h, q) per generator) and
    `triples` (iterable of (i, j, coeff) differential entries, raising h by
    one and preserving q).  Verifies d*d = 0 unless the complex carries a
    `d_squared_checked` flag set by its builder.
    """
    gradings = complex_obj.gradings
    triples = list(complex_obj.triples)

    for i, j, v in triples:
        hi, qi = gradings[i]
        hj, qj = gradings[j]
        if v and (hj != hi + 1 or qj != qi):
            raise IntegrityError(
                f"differential entry {i}->{j} breaks gradings "
                f"({(hi, qi)} -> {(hj, qj)})")

    if not getattr(complex_obj, "d_squared_checked", False):
        by_src: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for i, j, v in triples:
            by_src[i].append((j, v))
        for i, out in by_src.items():
            acc: dict[int, int] = {}
            for j, v in out:
                for k, w in by_src.get(j, ()):  # second differential
                    acc[k] = acc.get(k, 0) + v * w
            for k, total in acc.items():
                if total:
                    raise IntegrityError(
                        f"d*d != 0: generator {i} reaches {k} with "
                        f"coefficient {total}")

    # group generators and entries by blocks
    counts: dict[tuple[int, int], int] = defaultdict(int)
    local: dict[int, int] = {}
    for idx, hq in enumerate(gradings):
        local[idx] = counts[hq]
        counts[hq] += 1
    block_entries: dict[tuple[int, int], list[tuple[int, int, int]]] = defaultdict(list)
    for i, j, v in triples:
        if v:
            block_entries[gradings[i]].append((local[i], local[j], v))

    ranks: dict[tuple[int, int], int] = {}
    factors: dict[tuple[int, int], tuple[int, ...]] = {}
    for hq, ents in block_entries.items():
        row_data: dict[int, dict[int, int]] = defaultdict(dict)
        col_index: dict[int, set] = defaultdict(set)
        for r, c, v in ents:
            nv = row_data[r].get(c, 0) + v
            if nv:
                row_data[r][c] = nv
                col_index[c].add(r)
            else:
                del row_data[r][c]
                col_index[c].discard(r)
        fs, rk = _snf_core(row_data, col_index)
        ranks[hq] = rk
        factors[hq] = fs

    groups = {}
    for (h, q), n in counts.items():
        rank_out = ranks.get((h, q), 0)
        rank_in = ranks.get((h - 1, q), 0)
        free = n - rank_out - rank_in
        tor = tuple(f for f in factors.get((h - 1, q), ()) if f > 1)
        if free < 0:
            raise IntegrityError("negative free rank; corrupt complex")
        if free or tor:
            groups[(h, q)] = (free, tor)
    return HomologyTable(groups)


def graded_euler_characteristic(complex_obj) -> dict[int, int]:
    """Coefficients of the graded Euler characteristic, keyed by q."""
    out: dict[int, int] = defaultdict(int)
    for h, q in complex_obj.gradings:
        out[q] += -1 if h % 2 else 1
    return {q: v for q, v in out.items() if v}


def table_euler_characteristic(table: HomologyTable) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for (h, q), (rk, _) in table.groups.items():
        out[q] += (-1 if h % 2 else 1) * rk
    return {q: v for q, v in out.items() if v}
