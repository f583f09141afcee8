"""Closed-form reduced homology of P(-p, q, r): diagonal rank tables and
bigraded Poincare polynomials.

Everything here is arithmetic in p, q, r and the crossing counts of the
oriented diagram; no complexes are built.  The homology of these pretzels
is free and supported in two adjacent diagonal gradings 2*delta = q - 2h,
namely n_plus - p and n_plus - p - 2 (one grading for the thin family
P(-p, p, r) with p odd).

The bigraded formulas aggregate "floor" and "wall" families of surviving
generators; the floor families are staircase-shaped and are packaged by
the coefficient patterns `phi` (ascending / plateau / descending) and
`psi` (doubled pairs).  One published wall monomial for the case p odd,
q = r = p + 1 carries an impossible grading (it lands outside the two
supported diagonals unless n_minus = 0); this module uses the corrected
exponent H^(-1 + 2p - n_minus).  See README, "Erratum note".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import crossing_counts, knot_orientation_pattern


class FormulaDomainError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Bigraded polynomials in Q (quantum) and H (homological)
# ---------------------------------------------------------------------------

@dataclass
class BigradedPoly:
    """Laurent polynomial in Q and H with integer coefficients."""

    coeffs: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @classmethod
    def monomial(cls, q_exp: int, h_exp: int, coeff: int = 1) -> "BigradedPoly":
        return cls({(q_exp, h_exp): coeff})

    @classmethod
    def from_x_coeffs(cls, coeffs, q_exp: int, h_exp: int) -> "BigradedPoly":
        """Substitute x -> Q^2 H into sum(c_n x^n), then shift by a monomial."""
        return cls({(q_exp + 2 * n, h_exp + n): c
                    for n, c in enumerate(coeffs) if c})

    @classmethod
    def geometric(cls, top: int, q_exp: int, h_exp: int) -> "BigradedPoly":
        """Monomial times sum_{n=0}^{top} (Q^2 H)^n; empty when top < 0."""
        return cls.from_x_coeffs([1] * (top + 1) if top >= 0 else [], q_exp,
                                 h_exp)

    def __add__(self, other: "BigradedPoly") -> "BigradedPoly":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return BigradedPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, BigradedPoly) and self.coeffs == other.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def scaled(self, c: int) -> "BigradedPoly":
        return BigradedPoly({k: c * v for k, v in self.coeffs.items()})

    def coefficient_sum(self) -> int:
        return sum(self.coeffs.values())

    def delta_collapse(self) -> dict[int, int]:
        """Total rank per diagonal, keyed by 2*delta = q_exp - 2*h_exp."""
        out: dict[int, int] = {}
        for (qe, he), v in self.coeffs.items():
            key = qe - 2 * he
            out[key] = out.get(key, 0) + v
        return {k: v for k, v in out.items() if v}

    def sorted_terms(self):
        return sorted(self.coeffs.items())


# ---------------------------------------------------------------------------
# Coefficient patterns
# ---------------------------------------------------------------------------

def phi_poly(p: int, q: int, r: int) -> list[int]:
    """Staircase coefficients 1, 2, ..., plateau at q-p-1, ..., 2, 1.

    The plateau is hit r-q+1 times; the list is empty when the staircase
    has negative length.  phi(1) = (q-p-1)(r-p-1).
    """
    top = (r - p) + (q - p) - 4
    if top < 0 or q - p - 1 <= 0:
        return []
    return [min(n + 1, q - p - 1, top - n + 1) for n in range(top + 1)]


def psi_poly(k: int) -> list[int]:
    """Doubled-pairs coefficients 1,1,2,2,...  Empty for k <= 0.

    For k even the middle value k/2 appears three times; for k odd the
    middle (k+1)/2 appears once.  The coefficient sum is k(k+1)/2.
    """
    if k <= 0:
        return []
    return [min(n // 2, (2 * k - 2 - n) // 2) + 1 for n in range(2 * k - 1)]


# ---------------------------------------------------------------------------
# Diagonal rank tables
# ---------------------------------------------------------------------------

def _check_domain(p: int, q: int, r: int) -> None:
    if not (1 <= p <= q <= r):
        raise FormulaDomainError("need 1 <= p <= q <= r")
    if p == 1:
        raise FormulaDomainError(
            "quasi-alternating: use alternating-link tools")


def delta_table(p: int, q: int, r: int, pattern: str) -> dict[int, int]:
    """Rank per diagonal (keyed by 2*delta) for P(-p, q, r), 2 <= p <= q <= r.

    The two supported diagonals are n_plus - p and n_plus - p - 2; the
    generic ranks are p^2 and (q-p)(r-p) for p even, and one less each for
    p odd, with special cases at q = p and at p odd, q = r = p + 1.
    """
    _check_domain(p, q, r)
    n_plus, _ = crossing_counts(pattern, p, q, r)
    upper = n_plus - p
    lower = upper - 2

    if p % 2 == 1 and q == p:
        hi, lo = p * p, 0
    elif p % 2 == 0 and q == p:
        if r == p:
            hi, lo = p * p + 1, 1
        else:
            hi, lo = p * p + r - p, r - p
    elif p % 2 == 1 and q == p + 1 and r == p + 1:
        hi, lo = p * p, 1
    elif p % 2 == 0:
        hi, lo = p * p, (q - p) * (r - p)
    else:
        hi, lo = p * p - 1, (q - p) * (r - p) - 1

    out = {}
    if hi:
        out[upper] = hi
    if lo:
        out[lower] = lo
    return out


def knot_delta_table(p: int, q: int, r: int) -> dict[int, int]:
    """Diagonal ranks for pretzel knots, straight from the parity cases.

    Valid when at most one of p, q, r is even and p >= 2.  Stated without
    reference to orientations; must agree with delta_table composed with
    the forced knot pattern.
    """
    if p < 2:
        raise FormulaDomainError(
            "quasi-alternating: use alternating-link tools")
    if not (p <= q <= r):
        raise FormulaDomainError("need p <= q <= r")
    evens = sum(1 for n in (p, q, r) if n % 2 == 0)
    if evens > 1:
        raise FormulaDomainError("not a knot: two or more even parameters")

    generic = (q - p) * (r - p) - 1
    if p % 2 == 0:
        return {q + r: p * p, q + r - 2: (q - p) * (r - p)}
    if q % 2 == 0:
        table = {-p + r: p * p - 1}
        if generic:
            table[-p + r - 2] = generic
        return table
    if r % 2 == 0:
        # symmetric to the q-even case with q and r interchanged
        table = {}
        hi = p * p - 1 + (1 if q == p else 0)
        if hi:
            table[-p + q] = hi
        if q != p and generic:
            table[-p + q - 2] = generic
        return table
    # all odd
    hi = p * p - 1 + (1 if q == p else 0)
    table = {0: hi}
    if q != p and generic:
        table[-2] = generic
    return table


# ---------------------------------------------------------------------------
# Bigraded contributions
# ---------------------------------------------------------------------------

def floor_contributions(p: int, q: int, r: int,
                        pattern: str) -> dict[str, BigradedPoly]:
    """Possible bigraded contributions of the floor generator families.

    Which of these actually appear in the homology depends on the case
    split in `bigraded_table`; all of them sit on the lower diagonal.
    """
    _check_domain(p, q, r)
    n_plus, n_minus = crossing_counts(pattern, p, q, r)
    s = n_plus - 2 * n_minus
    return {
        "far_floor": BigradedPoly.from_x_coeffs(
            phi_poly(p, q, r), 6 + 3 * p + s, 2 * p - n_minus + 4),
        "floor_row_strip": BigradedPoly.geometric(
            r - p - 3, 4 + 3 * p + s, 2 * p - n_minus + 3),
        "floor_col_strip": BigradedPoly.geometric(
            q - p - 3, 4 + 3 * p + s, 2 * p - n_minus + 3),
        "floor_corner_dot": BigradedPoly.monomial(
            3 * p + s, 2 * p - n_minus + 1),
        "floor_diag_dot": BigradedPoly.monomial(
            2 + 3 * p + s, 2 * p - n_minus + 2),
        "floor_anchor": BigradedPoly.monomial(
            -2 + 3 * p + s, 2 * p - n_minus),
    }


def wall_contributions(p: int, q: int, r: int,
                       pattern: str) -> dict[str, BigradedPoly]:
    """Possible bigraded contributions of the wall generator families.

    All of these sit on the upper diagonal.  The pair monomials are given
    per dot; how many survive depends on the parity of p.
    """
    _check_domain(p, q, r)
    n_plus, n_minus = crossing_counts(pattern, p, q, r)
    s = n_plus - 2 * n_minus
    base = BigradedPoly.geometric(p - 2, -p + s, -n_minus) + \
        BigradedPoly.monomial(p + s, p - n_minus)
    return {
        "wall_corner_run": base,
        "upper_wall_stairs": BigradedPoly.geometric(
            p - 4, 4 + p + s, 2 + p - n_minus),
        "lower_wall_stairs": BigradedPoly.geometric(
            p - 3, 2 + p + s, 1 + p - n_minus),
        "wall_fan_outer": BigradedPoly.from_x_coeffs(
            psi_poly(p - 2), 6 - p + s, 3 - n_minus),
        "wall_fan_inner": BigradedPoly.from_x_coeffs(
            psi_poly(p - 2), 4 - p + s, 2 - n_minus),
        "wall_top_dot": BigradedPoly.monomial(
            2 + 3 * p + s, 1 + 2 * p - n_minus),
        "wall_mid_dot": BigradedPoly.monomial(
            3 * p + s, 2 * p - n_minus),
        "wall_low_dot": BigradedPoly.monomial(
            -2 + 3 * p + s, -1 + 2 * p - n_minus),
    }


def bigraded_case(p: int, q: int, r: int) -> str:
    """Name of the case the bigraded formula dispatches to.

    Used by the validation sweeps so that any mismatch is reported against
    the specific published formula it exercises.
    """
    _check_domain(p, q, r)
    parity = "p even" if p % 2 == 0 else "p odd"
    if q >= p + 2:
        return f"{parity}, q >= p+2"
    if q == p + 1:
        return f"{parity}, q = p+1, " + ("r = q" if r == q else "r > q")
    if p % 2 == 0:
        if r == p:
            return "p even, q = p, r = p"
        if r == p + 1:
            return "p even, q = p, r = p+1"
        return "p even, q = p, r > p+1"
    return "p odd, q = p"


def bigraded_table(p: int, q: int, r: int, pattern: str) -> BigradedPoly:
    """Bigraded Poincare polynomial of the reduced homology of P(-p, q, r).

    Exhaustive case split over 2 <= p <= q <= r.  In the p-even cases the
    low wall pair contributes with multiplicity 2, reduced to 1 when
    p = 2 (the second dot coincides with a cancelled generator).
    """
    _check_domain(p, q, r)
    n_plus, n_minus = crossing_counts(pattern, p, q, r)
    s = n_plus - 2 * n_minus
    fl = floor_contributions(p, q, r, pattern)
    wl = wall_contributions(p, q, r, pattern)
    walls = (wl["wall_corner_run"] + wl["upper_wall_stairs"]
             + wl["lower_wall_stairs"] + wl["wall_fan_outer"]
             + wl["wall_fan_inner"])
    floors = (fl["far_floor"] + fl["floor_row_strip"] + fl["floor_col_strip"])
    low_pair = wl["wall_low_dot"].scaled(1 if p == 2 else 2)

    even = p % 2 == 0
    if q >= p + 2:
        if even:
            return (floors + walls + fl["floor_diag_dot"].scaled(2)
                    + fl["floor_anchor"] + wl["wall_top_dot"] + low_pair)
        return (floors + walls + fl["floor_diag_dot"]
                + fl["floor_corner_dot"] + wl["wall_mid_dot"]
                + wl["wall_low_dot"])
    if q == p + 1 and r > q:
        if even:
            return (fl["floor_row_strip"] + walls + fl["floor_diag_dot"]
                    + fl["floor_anchor"] + wl["wall_top_dot"] + low_pair)
        return (fl["floor_row_strip"] + walls + fl["floor_corner_dot"]
                + wl["wall_mid_dot"] + wl["wall_low_dot"])
    if q == p + 1 and r == q:
        if even:
            return (walls + fl["floor_anchor"] + wl["wall_top_dot"]
                    + low_pair)
        # corrected low-dot exponent; see module docstring
        return (walls + fl["floor_corner_dot"] + wl["wall_mid_dot"]
                + wl["wall_low_dot"] + wl["wall_top_dot"])
    # q == p
    if even:
        if r > p + 1:
            return (fl["floor_row_strip"] + walls + fl["floor_anchor"]
                    + fl["floor_diag_dot"]
                    + BigradedPoly.geometric(
                        r - p - 1, 2 + 3 * p + s, 1 + 2 * p - n_minus)
                    + wl["wall_mid_dot"] + low_pair)
        if r == p + 1:
            return (walls + fl["floor_anchor"] + wl["wall_top_dot"]
                    + wl["wall_mid_dot"] + low_pair)
        return (walls + fl["floor_anchor"] + wl["wall_mid_dot"].scaled(2)
                + low_pair)
    return (walls + wl["wall_low_dot"] + wl["wall_mid_dot"]
            + BigradedPoly.monomial(3 * p + s + 2 * (r - p),
                                    2 * p - n_minus + (r - p)))


def bigraded_for_knot(p: int, q: int, r: int) -> BigradedPoly:
    return bigraded_table(p, q, r, knot_orientation_pattern(p, q, r))
