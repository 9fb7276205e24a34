"""Exact arithmetic foundation: Gaussian rationals, univariate polynomials,
rational functions in canonical form, and partial fraction decomposition.

Coefficients live in Q(i), complex numbers with rational real and imaginary
parts, stored as ``fractions.Fraction`` pairs so every computation downstream
is exact.  Rational functions are canonicalized on construction (numerator and
denominator coprime, denominator monic), which makes structural equality
decide mathematical equality.

All values are immutable and all operations are pure functions; sharing
between threads is safe.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import mpmath


class AlgebraError(ArithmeticError):
    """Base class for failures of the exact-arithmetic layer."""


class PoleEvaluationError(AlgebraError):
    """Raised when a rational function is evaluated at a pole."""


class UnsupportedDenominatorError(AlgebraError):
    """Raised when a denominator does not split into linear factors with
    Gaussian-rational roots."""


Rationalish = Union[int, Fraction]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


@dataclass(frozen=True)
class GaussianRational:
    """A complex number with exact rational real and imaginary parts.

    ``Fraction`` keeps each part reduced with positive denominator, so
    structural equality of the two parts is equality in Q(i).
    """

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    # -- predicates ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def __bool__(self) -> bool:
        return not self.is_zero

    def as_fraction(self) -> Fraction:
        if self.im != 0:
            raise AlgebraError(f"{self} is not real")
        return self.re

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "GaussianRational":
        other = grat(other)
        return _gr(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        other = grat(other)
        return _gr(self.re - other.re, self.im - other.im)

    def __rsub__(self, other) -> "GaussianRational":
        return grat(other) - self

    def __neg__(self) -> "GaussianRational":
        return _gr(-self.re, -self.im)

    def __mul__(self, other) -> "GaussianRational":
        other = grat(other)
        if not self.im and not other.im:
            return _gr(self.re * other.re, _F0)
        return _gr(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return _gr(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        if not self.im:
            if not self.re:
                raise ZeroDivisionError("division by zero in Q(i)")
            return _gr(1 / self.re, _F0)
        n = self.abs2()
        return _gr(self.re / n, -self.im / n)

    def __truediv__(self, other) -> "GaussianRational":
        return self * grat(other).inverse()

    def __rtruediv__(self, other) -> "GaussianRational":
        return grat(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussianRational":
        if n < 0:
            return self.inverse() ** (-n)
        out = GR_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


_F0 = Fraction(0)


def _gr(re: Fraction, im: Fraction = _F0) -> GaussianRational:
    """Internal fast constructor; both arguments must already be Fractions."""
    out = object.__new__(GaussianRational)
    object.__setattr__(out, "re", re)
    object.__setattr__(out, "im", im)
    return out


def grat(x) -> GaussianRational:
    """Coerce ints, Fractions, or (re, im) pairs into a GaussianRational."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return _gr(_frac(x))
    if isinstance(x, tuple) and len(x) == 2:
        return GaussianRational(_frac(x[0]), _frac(x[1]))
    raise TypeError(f"cannot interpret {x!r} as a Gaussian rational")


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1))
GR_I = GaussianRational(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class Polynomial:
    """Dense univariate polynomial over Q(i), coefficients by ascending power.

    The zero polynomial stores an empty tuple; otherwise the leading
    coefficient is nonzero.
    """

    coeffs: tuple[GaussianRational, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [grat(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    # -- structure -----------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> GaussianRational:
        if self.is_zero:
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> GaussianRational:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else GR_ZERO

    @staticmethod
    def constant(c) -> "Polynomial":
        return Polynomial([grat(c)])

    @staticmethod
    def variable() -> "Polynomial":
        return Polynomial([GR_ZERO, GR_ONE])

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return _poly([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return _poly([self.coeff(i) - other.coeff(i) for i in range(n)])

    def __rsub__(self, other) -> "Polynomial":
        return _as_poly(other) - self

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction, GaussianRational)):
            c = grat(other)
            if c.is_zero:
                return P_ZERO
            return _poly([a * c for a in self.coeffs])
        other = _as_poly(other)
        if self.is_zero or other.is_zero:
            return P_ZERO
        out = [GR_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return _poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise AlgebraError("negative polynomial power")
        out = P_ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = _as_poly(other)
        if other.is_zero:
            raise AlgebraError("division by zero polynomial")
        q = [GR_ZERO] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        inv_lc = other.lc.inverse()
        for i in range(len(rem) - 1, d - 1, -1):
            if rem[i].is_zero:
                continue
            f = rem[i] * inv_lc
            q[i - d] = f
            for j, b in enumerate(other.coeffs):
                if not b.is_zero:
                    rem[i - d + j] = rem[i - d + j] - f * b
        return _poly(q), _poly(rem[:d] if d > 0 else [])

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self * self.lc.inverse()

    def derivative(self) -> "Polynomial":
        return Polynomial([c * i for i, c in enumerate(self.coeffs)][1:])

    def shift(self, h) -> "Polynomial":
        """The polynomial z -> self(z + h)."""
        zh = Polynomial([grat(h), GR_ONE])
        out = P_ZERO
        for c in reversed(self.coeffs):
            out = out * zh + Polynomial.constant(c)
        return out

    def evaluate(self, x) -> GaussianRational:
        x = grat(x)
        out = GR_ZERO
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c.is_zero:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if i > 0 and c == GR_ONE:
                cs = ""
            elif i > 0 and c == -GR_ONE:
                cs = "-"
            else:
                cs = str(c)
                if mono:
                    cs += "*"
            parts.append(cs + mono)
        return " + ".join(parts).replace("+ -", "- ")


def _poly(coeffs: list[GaussianRational]) -> Polynomial:
    """Internal fast constructor; coefficients must already be coerced."""
    end = len(coeffs)
    while end and coeffs[end - 1].is_zero:
        end -= 1
    out = object.__new__(Polynomial)
    object.__setattr__(out, "coeffs", tuple(coeffs[:end]))
    return out


def _as_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction, GaussianRational)):
        return Polynomial.constant(grat(x))
    raise TypeError(f"cannot interpret {x!r} as a polynomial")


P_ZERO = Polynomial()
P_ONE = Polynomial([GR_ONE])
Z = Polynomial.variable()


def poly_from_roots(roots: Iterable) -> Polynomial:
    out = P_ONE
    for r in roots:
        out = out * Polynomial([-grat(r), GR_ONE])
    return out


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd via the Euclidean algorithm."""
    while not b.is_zero:
        r = a % b
        a, b = b, (r.monic() if not r.is_zero else P_ZERO)
    return a.monic() if not a.is_zero else P_ZERO


@dataclass(frozen=True)
class RationalFunction:
    """A quotient of polynomials in canonical form: numerator and denominator
    coprime, denominator monic and nonzero.  Structural equality of canonical
    forms is equality of rational functions."""

    num: Polynomial
    den: Polynomial

    def __init__(self, num, den=P_ONE):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero:
            raise AlgebraError("division by zero polynomial")
        if num.is_zero:
            object.__setattr__(self, "num", P_ZERO)
            object.__setattr__(self, "den", P_ONE)
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
        inv = den.lc.inverse()
        object.__setattr__(self, "num", num * inv)
        object.__setattr__(self, "den", den * inv)

    # -- structure -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_proper(self) -> bool:
        """True when the function vanishes at infinity."""
        return self.num.degree < self.den.degree

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> GaussianRational:
        if not self.is_constant:
            raise AlgebraError(f"{self} is not constant")
        return self.num.coeff(0)

    @staticmethod
    def constant(c) -> "RationalFunction":
        return RationalFunction(Polynomial.constant(grat(c)))

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(
            self.num * other.den - other.num * self.den, self.den * other.den
        )

    def __rsub__(self, other) -> "RationalFunction":
        return _as_rf(other) - self

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __mul__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other.is_zero:
            raise AlgebraError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _as_rf(other) / self

    def shift(self, h) -> "RationalFunction":
        """The rational function z -> self(z + h)."""
        return RationalFunction(self.num.shift(h), self.den.shift(h))

    def evaluate(self, x) -> GaussianRational:
        x = grat(x)
        d = self.den.evaluate(x)
        if d.is_zero:
            raise PoleEvaluationError(f"evaluation at pole z = {x}")
        return self.num.evaluate(x) / d

    def poles(self) -> list[tuple[GaussianRational, int]]:
        """Poles with multiplicities, sorted by descending real part."""
        return linear_roots(self.den)

    def partial_fractions(self) -> "PartialFractionForm":
        return partial_fractions(self)

    def __str__(self) -> str:
        if self.den == P_ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _as_rf(x) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, GaussianRational, Polynomial)):
        return RationalFunction(_as_poly(x))
    raise TypeError(f"cannot interpret {x!r} as a rational function")


RF_ZERO = RationalFunction(P_ZERO)
RF_ONE = RationalFunction(P_ONE)


def normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Canonical coprime, monic-denominator form of num/den."""
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------

_ROOT_CACHE: dict[tuple, list[tuple[GaussianRational, int]]] = {}


def linear_roots(p: Polynomial) -> list[tuple[GaussianRational, int]]:
    """All roots of ``p`` with multiplicities, provided ``p`` splits into
    linear factors with Gaussian-rational roots.

    Roots are located numerically (on the square-free part, so clusters
    cannot hide multiplicities), snapped to nearby rationals, and then
    verified exactly by polynomial division; the numerics are only a search
    heuristic, never trusted.  Raises UnsupportedDenominatorError when some
    factor cannot be certified.
    """
    if p.is_zero:
        raise AlgebraError("zero polynomial has no well-defined roots")
    if p.degree == 0:
        return []
    key = p.monic().coeffs
    cached = _ROOT_CACHE.get(key)
    if cached is not None:
        return cached

    d = poly_gcd(p, p.derivative())
    sf = (p // d).monic() if d.degree > 0 else p.monic()

    roots: list[tuple[GaussianRational, int]] = []
    remaining = p.monic()
    # small integer roots first: denominators in this calculus are almost
    # always products of (z + small integer) factors
    for cand_int in _integer_candidates(sf):
        cand = grat(cand_int)
        lin = Polynomial([-cand, GR_ONE])
        mult = 0
        while True:
            q, rem = divmod(remaining, lin)
            if rem.is_zero:
                remaining = q
                mult += 1
            else:
                break
        if mult:
            roots.append((cand, mult))
    if remaining.degree > 0:
        # locate the rest on the square-free part, so that each distinct
        # root appears once regardless of multiplicity
        rd = poly_gcd(remaining, remaining.derivative())
        rem_sf = (remaining // rd).monic() if rd.degree > 0 else remaining
        for r in _numeric_roots(rem_sf):
            cand = _snap(r)
            if cand is None:
                raise UnsupportedDenominatorError(f"unsupported denominator: {p}")
            lin = Polynomial([-cand, GR_ONE])
            mult = 0
            while True:
                q, rem = divmod(remaining, lin)
                if rem.is_zero:
                    remaining = q
                    mult += 1
                else:
                    break
            if mult == 0:
                raise UnsupportedDenominatorError(f"unsupported denominator: {p}")
            roots.append((cand, mult))
        if remaining.degree > 0:  # pragma: no cover
            raise UnsupportedDenominatorError(f"unsupported denominator: {p}")
    roots.sort(key=lambda rm: (rm[0].re, rm[0].im), reverse=True)
    _ROOT_CACHE[key] = roots
    return roots


def _integer_candidates(sf: Polynomial):
    """Integer roots of a monic square-free polynomial by direct testing of
    divisor-derived candidates of the constant term."""
    c0 = sf.coeff(0)
    if not c0.is_real:
        return
    if c0.is_zero:
        yield 0
        # deflate the z-factor implicitly: candidates from the next coefficient
        i = 1
        while i < len(sf.coeffs) and sf.coeffs[i].is_zero:
            i += 1
        rest = _poly(list(sf.coeffs[i:]))
        yield from (c for c in _integer_candidates(rest) if c != 0)
        return
    f = c0.re
    if f.denominator != 1:
        return
    n = abs(f.numerator)
    divisors = set()
    i = 1
    while i * i <= n and i <= 10**6:
        if n % i == 0:
            divisors.add(i)
            divisors.add(n // i)
        i += 1
    for dv in sorted(divisors):
        for cand in (-dv, dv):
            if sf.evaluate(cand).is_zero:
                yield cand


def _numeric_roots(p: Polynomial):
    for dps, extra in ((40, 80), (120, 300)):
        with mpmath.workdps(dps):
            cs = [mpmath.mpc(mpmath.mpf(c.re.numerator) / mpmath.mpf(c.re.denominator),
                             mpmath.mpf(c.im.numerator) / mpmath.mpf(c.im.denominator))
                  for c in reversed(p.coeffs)]
            try:
                return mpmath.polyroots(cs, maxsteps=200, extraprec=extra)
            except mpmath.libmp.NoConvergence:  # pragma: no cover
                continue
    raise UnsupportedDenominatorError(f"unsupported denominator: {p}")


def _snap(x) -> GaussianRational | None:
    try:
        re = Fraction(mpmath.nstr(x.real, 30)).limit_denominator(10**9)
        im = Fraction(mpmath.nstr(x.imag, 30)).limit_denominator(10**9)
    except (ValueError, ZeroDivisionError):  # pragma: no cover
        return None
    return GaussianRational(re, im)


# ---------------------------------------------------------------------------
# Partial fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartialFractionForm:
    """Decomposition ``polynomial_part + sum coeff/(z - pole)^order``.

    (pole, order) pairs are distinct, and for each pole the maximal-order
    coefficient is nonzero.  ``recombine`` reproduces the source rational
    function exactly.
    """

    polynomial_part: Polynomial
    terms: tuple[tuple[GaussianRational, int, GaussianRational], ...]

    def recombine(self) -> RationalFunction:
        out = RationalFunction(self.polynomial_part)
        for pole, order, coeff in self.terms:
            out = out + RationalFunction(
                Polynomial.constant(coeff), Polynomial([-pole, GR_ONE]) ** order
            )
        return out


def partial_fractions(f: RationalFunction) -> PartialFractionForm:
    """Decompose ``f`` over linear factors of its denominator.

    The coefficient of 1/(z-r)^(m-j) is the j-th Taylor coefficient at r of
    f with the (z-r)^m factor removed, computed by exact power-series division.
    """
    poly_part, rem = divmod(f.num, f.den)
    terms: list[tuple[GaussianRational, int, GaussianRational]] = []
    if not rem.is_zero:
        for pole, m in linear_roots(f.den):
            lin = Polynomial([-pole, GR_ONE])
            cofactor = f.den // lin**m
            # Taylor-expand rem/cofactor around the pole up to order m-1.
            num_s = rem.shift(pole)
            den_s = cofactor.shift(pole)
            series = _series_div(num_s, den_s, m)
            for j, t in enumerate(series):
                if not t.is_zero:
                    terms.append((pole, m - j, t))
    terms.sort(key=lambda t: (t[0].re, t[0].im, t[1]), reverse=True)
    return PartialFractionForm(poly_part, tuple(terms))


def _series_div(num: Polynomial, den: Polynomial, n: int) -> list[GaussianRational]:
    """First n coefficients of the power series num/den (den(0) != 0)."""
    inv0 = den.coeff(0).inverse()
    out: list[GaussianRational] = []
    for i in range(n):
        acc = num.coeff(i)
        for j in range(i):
            acc = acc - out[j] * den.coeff(i - j)
        out.append(acc * inv0)
    return out


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

Matrix = list[list[GaussianRational]]


def rref(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    m = [row[:] for row in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(m)) if not m[i][c].is_zero), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = m[r][c].inverse()
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and not m[i][c].is_zero:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows: Matrix, ncols: int) -> list[list[GaussianRational]]:
    """Basis of the solution space of rows . x = 0, one vector per free column."""
    if not rows:
        return [[GR_ONE if i == j else GR_ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [GR_ZERO] * ncols
        vec[fc] = GR_ONE
        for row, pc in zip(red, pivots):
            vec[pc] = -row[fc]
        basis.append(vec)
    return basis


def solve_linear(rows: Matrix, rhs: list[GaussianRational]) -> list[GaussianRational] | None:
    """One exact solution of rows . x = rhs, or None when inconsistent."""
    if not rows:
        return None
    ncols = len(rows[0])
    aug = [row + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [GR_ZERO] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[-1]
    return x
