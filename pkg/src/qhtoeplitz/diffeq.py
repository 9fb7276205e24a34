"""Exact rational solutions of first-order linear difference equations

    a(z) X(z + h) + b(z) X(z) = rhs(z)

over the Gaussian rationals, with a positive rational step h.  The solver
finds *all* rational solutions: a universal denominator bounds every possible
pole (by walking shift orbits between roots of the trailing and leading
coefficients), an explicit degree bound caps the numerator, and the remaining
finite problem is an exact linear solve.  The homogeneous kernel of a
first-order equation is at most one-dimensional; in particular the pure
period equation X(z+h) = X(z) has exactly the constants as rational
solutions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import (
    AlgebraError,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    P_ONE,
    Polynomial,
    RF_ZERO,
    RationalFunction,
    grat,
    linear_roots,
    nullspace,
    solve_linear,
)


@dataclass(frozen=True)
class DifferenceEquation:
    """a(z) X(z+h) + b(z) X(z) = rhs(z); a and b must not both vanish."""

    a: RationalFunction
    b: RationalFunction
    rhs: RationalFunction
    step: Fraction

    def __post_init__(self):
        object.__setattr__(self, "step", Fraction(self.step))
        if self.step <= 0:
            raise AlgebraError("step must be positive")
        if self.a.is_zero and self.b.is_zero:
            raise AlgebraError("a and b cannot both be zero")

    def residual(self, x: RationalFunction) -> RationalFunction:
        return self.a * x.shift(self.step) + self.b * x - self.rhs


@dataclass(frozen=True)
class AffineFamily:
    """An affine space of rational functions: base + sum c_i * generator_i
    over named free constants c_i."""

    base: RationalFunction
    generators: tuple[tuple[str, RationalFunction], ...]

    def __init__(self, base: RationalFunction, generators: Iterable = ()):
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "generators", tuple(generators))

    @property
    def dimension(self) -> int:
        return len(self.generators)

    def member(self, assignment: dict | None = None) -> RationalFunction:
        out = self.base
        assignment = assignment or {}
        for name, gen in self.generators:
            if name in assignment:
                out = out + gen * RationalFunction.constant(assignment[name])
        return out

    def __str__(self) -> str:
        parts = [str(self.base)] if not self.base.is_zero else []
        parts += [f"{name}*({gen})" for name, gen in self.generators]
        return " + ".join(parts) if parts else "0"


def certify_residual(eq: DifferenceEquation, x: RationalFunction) -> bool:
    """Exact check that x solves the equation (canonical-form zero residual)."""
    return eq.residual(x).is_zero


def homogeneous_solutions(eq: DifferenceEquation, name: str = "c") -> AffineFamily:
    """All rational X with a X(z+h) + b X = 0, as a 0- or 1-parameter family."""
    if eq.a.is_zero or eq.b.is_zero:
        # a X(z+h) = 0 or b X = 0 forces X = 0
        return AffineFamily(RF_ZERO, [])
    gens = _kernel(eq.a, eq.b, eq.step)
    return AffineFamily(RF_ZERO, [(name, g) for g in gens])


def solve(eq: DifferenceEquation, name: str = "c") -> AffineFamily | None:
    """All rational solutions, or None when no rational solution exists."""
    if eq.a.is_zero:
        return AffineFamily(eq.rhs / eq.b, [])
    if eq.b.is_zero:
        return AffineFamily((eq.rhs / eq.a).shift(-eq.step), [])
    part = _particular(eq.a, eq.b, eq.rhs, eq.step)
    if part is None:
        return None
    gens = _kernel(eq.a, eq.b, eq.step)
    return AffineFamily(part, [(name, g) for g in gens])


# ---------------------------------------------------------------------------
# Engine: universal denominator, degree bound, linear solve
# ---------------------------------------------------------------------------

def _cleared(a: RationalFunction, b: RationalFunction, rhs: RationalFunction):
    """Multiply through so the equation has polynomial coefficients."""
    m_ab = a.den * b.den
    A = a.num * b.den * rhs.den
    B = b.num * a.den * rhs.den
    C = rhs.num * m_ab
    return A, B, C


def _merge_roots(polys) -> dict[GaussianRational, int]:
    out: dict[GaussianRational, int] = {}
    for p in polys:
        if p.degree >= 1:
            for r, m in linear_roots(p):
                out[r] = out.get(r, 0) + m
    return out


def universal_denominator(A: Polynomial, B: Polynomial, h: Fraction) -> Polynomial:
    """A polynomial divisible by the denominator of every rational solution of
    A(z) X(z+h) + B(z) X(z) = C(z) with polynomial A, B, C.

    Shift-orbit argument: a maximal pole of X (no pole at +h, +2h, ...) must
    be cancelled by a root of B, a minimal one by a root of A(z-h); common
    factors are peeled orbit by orbit, longest span first, and allocated
    along every intermediate shift.
    """
    return _universal_from_roots(_merge_roots([A]), _merge_roots([B]), h)


def _universal_from_roots(roots_a: dict[GaussianRational, int],
                          roots_b: dict[GaussianRational, int],
                          h: Fraction) -> Polynomial:
    hh = grat(Fraction(h))
    va = {r + hh: m for r, m in roots_a.items()}  # roots of A(z - h)
    vb = dict(roots_b)
    spans = set()
    for rb in vb:
        for ra in va:
            d = rb - ra
            if d.im == 0:
                q = d.re / h
                if q.denominator == 1 and q >= 0:
                    spans.add(int(q))
    u_roots: dict[GaussianRational, int] = {}
    for j in sorted(spans, reverse=True):
        for rb in list(vb):
            ra = rb - hh * j
            mb, ma = vb.get(rb, 0), va.get(ra, 0)
            m = min(mb, ma)
            if m <= 0:
                continue
            vb[rb] = mb - m
            va[ra] = ma - m
            for t in range(j + 1):
                point = rb - hh * t
                u_roots[point] = u_roots.get(point, 0) + m
    out = P_ONE
    for r, m in u_roots.items():
        out = out * Polynomial([-r, GR_ONE]) ** m
    return out


def _degree_bound(at: Polynomial, bt: Polynomial, rhs_degree: int | None,
                  h: Fraction) -> int:
    """Largest possible numerator degree of a solution Y of
    at Y(z+h) + bt Y = (polynomial of rhs_degree); None encodes a zero rhs."""
    da, db = at.degree, bt.degree
    d = max(da, db)
    if da != db or not (at.lc + bt.lc).is_zero:
        return rhs_degree - d if rhs_degree is not None else -1
    # leading terms cancel: examine the next coefficient
    cands = []
    if rhs_degree is not None:
        cands.append(rhs_degree - d + 1)
    second = at.coeff(d - 1) + bt.coeff(d - 1)
    n0 = -second / (at.lc * GaussianRational(Fraction(h)))
    if n0.is_real and n0.re.denominator == 1 and n0.re >= 0:
        cands.append(int(n0.re))
    return max(cands, default=-1)


def _column_polys(at: Polynomial, bt: Polynomial, n: int, h: Fraction):
    """Polynomials multiplying each unknown coefficient y_i of Y."""
    zh = Polynomial([GaussianRational(Fraction(h)), GaussianRational(Fraction(1))])
    z = Polynomial.variable()
    cols = []
    zh_pow = P_ONE
    z_pow = P_ONE
    for _ in range(n + 1):
        cols.append(at * zh_pow + bt * z_pow)
        zh_pow = zh_pow * zh
        z_pow = z_pow * z
    return cols


def _kernel(a: RationalFunction, b: RationalFunction,
            h: Fraction) -> list[RationalFunction]:
    A, B, _ = _cleared(a, b, RF_ZERO)
    u = _universal_from_roots(
        _merge_roots([a.num, b.den]), _merge_roots([b.num, a.den]), h
    )
    at = A * u
    bt = B * u.shift(h)
    n = _degree_bound(at, bt, None, h)
    if n < 0:
        return []
    cols = _column_polys(at, bt, n, h)
    nrows = max(c.degree for c in cols) + 1
    rows = [[cols[i].coeff(j) for i in range(n + 1)] for j in range(nrows)]
    gens = []
    for vec in nullspace(rows, n + 1):
        g = RationalFunction(Polynomial(vec), u)
        if not g.is_zero:
            gens.append(g / RationalFunction.constant(g.num.lc))
    if len(gens) > 1:  # pragma: no cover - impossible for first order
        raise AlgebraError("first-order kernel cannot exceed dimension 1")
    return gens


def _particular(a: RationalFunction, b: RationalFunction, rhs: RationalFunction,
                h: Fraction) -> RationalFunction | None:
    if rhs.is_zero:
        return RF_ZERO
    A, B, C = _cleared(a, b, rhs)
    u = _universal_from_roots(
        _merge_roots([a.num, b.den, rhs.den]),
        _merge_roots([b.num, a.den, rhs.den]), h
    )
    at = A * u
    bt = B * u.shift(h)
    ct = C * u * u.shift(h)
    n = _degree_bound(at, bt, ct.degree, h)
    if n < 0:
        return None
    cols = _column_polys(at, bt, n, h)
    nrows = max(max(c.degree for c in cols), ct.degree) + 1
    rows = [[cols[i].coeff(j) for i in range(n + 1)] for j in range(nrows)]
    target = [ct.coeff(j) for j in range(nrows)]
    y = solve_linear(rows, target)
    if y is None:
        return None
    return RationalFunction(Polynomial(y), u)
