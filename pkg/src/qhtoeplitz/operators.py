"""Graded (weighted-shift) calculus for Toeplitz operators with polar-
decomposed symbols on the Bergman space.

A symbol component e^{ip theta} phi(r) sends the basis vector z^k to
W(k) z^{k+p}; for p >= 0 the weight is 2(k+p+1) phihat(2k+p+2), and for
p = -q < 0 it is zero on 0 <= k < q and 2(k-q+1) phihat(2k-q+2) beyond.
Weights are stored as rational functions of the complexified variable
u = 2k, attached to piecewise segments so that every truncation boundary
is tracked exactly through composition and subtraction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import (
    AlgebraError,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    PoleEvaluationError,
    Polynomial,
    RF_ZERO,
    RationalFunction,
    grat,
)
from .radial import (
    MellinImage,
    NoRadialPreimageError,
    RadialSymbol,
    inverse_mellin,
    is_admissible,
    mellin,
)


class NotToeplitzError(AlgebraError):
    """Raised by symbol recovery when a graded operator is not a Toeplitz
    operator of an admissible symbol in the supported class."""

    def __init__(self, message: str, degree: int, witness=None, index: int | None = None):
        super().__init__(message)
        self.degree = degree
        self.witness = witness
        self.index = index


@dataclass(frozen=True)
class PolarSymbol:
    """A symbol with finite polar decomposition: degree -> radial part."""

    parts: tuple[tuple[int, RadialSymbol], ...]

    def __init__(self, parts: Mapping[int, RadialSymbol] | Iterable = ()):
        items = parts.items() if isinstance(parts, Mapping) else parts
        merged: dict[int, RadialSymbol] = {}
        for degree, radial in items:
            degree = int(degree)
            merged[degree] = merged.get(degree, RadialSymbol()) + radial
        out = tuple(sorted((d, r) for d, r in merged.items() if not r.is_zero))
        object.__setattr__(self, "parts", out)

    @property
    def is_zero(self) -> bool:
        return not self.parts

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.parts)

    def radial_part(self, degree: int) -> RadialSymbol:
        for d, r in self.parts:
            if d == degree:
                return r
        return RadialSymbol()

    def window(self) -> tuple[int, int]:
        if self.is_zero:
            return (0, 0)
        return (self.parts[0][0], self.parts[-1][0])

    # -- constructors and arithmetic -----------------------------------------
    @staticmethod
    def quasihomogeneous(degree: int, radial: RadialSymbol) -> "PolarSymbol":
        return PolarSymbol([(degree, radial)])

    @staticmethod
    def zbar_power(l: int, coeff=1) -> "PolarSymbol":
        """The symbol coeff * conj(z)^l = coeff e^{-il theta} r^l."""
        if l < 0:
            raise AlgebraError("zbar power needs l >= 0")
        return PolarSymbol([(-l, RadialSymbol.monomial(coeff, l))])

    @staticmethod
    def z_power(l: int, coeff=1) -> "PolarSymbol":
        return PolarSymbol([(l, RadialSymbol.monomial(coeff, l))])

    @staticmethod
    def constant(c) -> "PolarSymbol":
        return PolarSymbol([(0, RadialSymbol.constant(c))])

    def __add__(self, other: "PolarSymbol") -> "PolarSymbol":
        return PolarSymbol(self.parts + other.parts)

    def __sub__(self, other: "PolarSymbol") -> "PolarSymbol":
        return self + other.scale(-1)

    def scale(self, factor) -> "PolarSymbol":
        return PolarSymbol([(d, r.scale(factor)) for d, r in self.parts])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"e({d})*[{r}]" for d, r in self.parts)


@dataclass(frozen=True)
class PiecewiseWeight:
    """An exactly-represented weight function on basis indices k >= 0.

    ``segments`` is an ordered list of (start_k, tail); the value is zero
    below the first start, each tail (a rational function of u = 2k) rules
    from its start to the next, and the last tail extends to infinity.
    Canonical form: starts strictly increasing and >= 0, no leading zero
    tail, structurally equal neighbours merged, and each start lowered as
    far as the tail's values allow, so equal functions on k >= 0 have equal
    canonical forms.
    """

    segments: tuple[tuple[int, RationalFunction], ...]

    def __init__(self, segments: Iterable = ()):
        segs = sorted(segments, key=lambda st: st[0])
        object.__setattr__(self, "segments", _canonical_segments(segs))

    # -- basic queries ---------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.segments

    @staticmethod
    def single(start: int, tail: RationalFunction) -> "PiecewiseWeight":
        return PiecewiseWeight([(start, tail)])

    def eventual_tail(self) -> RationalFunction:
        return self.segments[-1][1] if self.segments else RF_ZERO

    def last_start(self) -> int:
        return self.segments[-1][0] if self.segments else 0

    def tail_at(self, k: int) -> RationalFunction:
        out = RF_ZERO
        for start, tail in self.segments:
            if k < start:
                break
            out = tail
        return out

    def value(self, k: int) -> GaussianRational:
        return self.tail_at(k).evaluate(2 * k)

    # -- arithmetic --------------------------------------------------------------
    def shift_index(self, j: int) -> "PiecewiseWeight":
        """The weight k -> self(k + j)."""
        return PiecewiseWeight(
            [(start - j, tail.shift(2 * j)) for start, tail in self.segments]
        )

    def __add__(self, other: "PiecewiseWeight") -> "PiecewiseWeight":
        return _combine(self, other, lambda a, b: a + b)

    def __sub__(self, other: "PiecewiseWeight") -> "PiecewiseWeight":
        return _combine(self, other, lambda a, b: a - b)

    def __mul__(self, other: "PiecewiseWeight") -> "PiecewiseWeight":
        return _combine(self, other, lambda a, b: a * b)

    def __neg__(self) -> "PiecewiseWeight":
        return self.scale(-1)

    def scale(self, factor) -> "PiecewiseWeight":
        factor = grat(factor)
        return PiecewiseWeight([(s, t * factor) for s, t in self.segments])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return "; ".join(f"k>={s}: {t}" for s, t in self.segments)


def _combine(a: PiecewiseWeight, b: PiecewiseWeight, op) -> PiecewiseWeight:
    if not a.segments:
        starts = [s for s, _ in b.segments]
    elif not b.segments:
        starts = [s for s, _ in a.segments]
    else:
        starts = sorted({s for s, _ in a.segments} | {s for s, _ in b.segments})
    segs = [(s, op(a.tail_at(s), b.tail_at(s))) for s in starts]
    return PiecewiseWeight(segs)


def _canonical_segments(segs) -> tuple[tuple[int, RationalFunction], ...]:
    # Deduplicate starts (later entry wins -- callers never produce overlaps),
    # clamp to k >= 0, then merge/trim until stable.
    by_start: dict[int, RationalFunction] = {}
    for start, tail in segs:
        by_start[start] = tail
    items = sorted(by_start.items())
    clamped: list[tuple[int, RationalFunction]] = []
    for start, tail in items:
        if start <= 0:
            clamped = [(0, tail)]
        else:
            clamped.append((start, tail))

    changed = True
    while changed:
        changed = False
        # leading zero tails are the implicit zero region
        while clamped and clamped[0][1].is_zero:
            clamped.pop(0)
            changed = True
        # merge structurally equal neighbours
        merged: list[tuple[int, RationalFunction]] = []
        for start, tail in clamped:
            if merged and merged[-1][1] == tail:
                changed = True
                continue
            merged.append((start, tail))
        clamped = merged
        # lower each start across indices where values happen to agree
        for i in range(len(clamped)):
            start, tail = clamped[i]
            floor = clamped[i - 1][0] if i > 0 else 0
            while start > floor and _values_match(
                tail, clamped[i - 1][1] if i > 0 else RF_ZERO, start - 1
            ):
                start -= 1
                changed = True
            clamped[i] = (start, tail)
        # a segment squeezed to zero length disappears
        pruned: list[tuple[int, RationalFunction]] = []
        for i, (start, tail) in enumerate(clamped):
            if i + 1 < len(clamped) and clamped[i + 1][0] <= start:
                changed = True
                continue
            pruned.append((start, tail))
        clamped = pruned
    return tuple(clamped)


def _values_match(a: RationalFunction, b: RationalFunction, k: int) -> bool:
    try:
        return a.evaluate(2 * k) == b.evaluate(2 * k)
    except PoleEvaluationError:
        return False


@dataclass(frozen=True)
class GradedOperator:
    """A finite sum of weighted shifts: degree -> piecewise weight.

    For each degree p the weight vanishes for k < max(0, -p); identically
    zero parts are dropped.
    """

    parts: tuple[tuple[int, PiecewiseWeight], ...]

    def __init__(self, parts: Mapping[int, PiecewiseWeight] | Iterable = ()):
        items = parts.items() if isinstance(parts, Mapping) else parts
        merged: dict[int, PiecewiseWeight] = {}
        for degree, weight in items:
            degree = int(degree)
            acc = merged.get(degree)
            merged[degree] = weight if acc is None else acc + weight
        out = []
        for degree, weight in sorted(merged.items()):
            if weight.is_zero:
                continue
            for k in range(0, max(0, -degree)):
                if not weight.value(k).is_zero:
                    raise AlgebraError(
                        f"weight at degree {degree} must vanish at k={k}"
                    )
            out.append((degree, weight))
        object.__setattr__(self, "parts", tuple(out))

    # -- queries ---------------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.parts

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.parts)

    def weight(self, degree: int) -> PiecewiseWeight:
        for d, w in self.parts:
            if d == degree:
                return w
        return PiecewiseWeight()

    def max_abs_degree(self) -> int:
        return max((abs(d) for d in self.degrees), default=0)

    @staticmethod
    def identity() -> "GradedOperator":
        return GradedOperator([(0, PiecewiseWeight.single(0, RationalFunction(1)))])

    # -- linear structure --------------------------------------------------------
    def __add__(self, other: "GradedOperator") -> "GradedOperator":
        return GradedOperator(self.parts + other.parts)

    def __sub__(self, other: "GradedOperator") -> "GradedOperator":
        return self + other.scale(-1)

    def __neg__(self) -> "GradedOperator":
        return self.scale(-1)

    def scale(self, factor) -> "GradedOperator":
        factor = grat(factor)
        if factor.is_zero:
            return GradedOperator()
        return GradedOperator([(d, w.scale(factor)) for d, w in self.parts])

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        return "\n".join(f"degree {d}: {w}" for d, w in self.parts)


def from_symbol(symbol: PolarSymbol) -> GradedOperator:
    """The Toeplitz operator of a polar-decomposed symbol.

    Degree p contributes the single-segment weight (u+2p+2) phihat(u+p+2)
    starting at k = max(0, -p), with phihat the Mellin image of the radial
    part and u = 2k.
    """
    parts = []
    for p, radial in symbol.parts:
        image = mellin(radial).value
        tail = RationalFunction(Polynomial([2 * p + 2, 1])) * image.shift(p + 2)
        parts.append((p, PiecewiseWeight.single(max(0, -p), tail)))
    return GradedOperator(parts)


def apply_operator(op: GradedOperator, k: int) -> dict[int, GaussianRational]:
    """Coefficients of op(z^k) on the monomial basis, keyed by shift degree."""
    if k < 0:
        raise AlgebraError("basis index must be nonnegative")
    out = {}
    for degree, weight in op.parts:
        v = weight.value(k)
        if not v.is_zero:
            out[degree] = v
    return out


def compose(s: GradedOperator, t: GradedOperator) -> GradedOperator:
    """The operator s o t (apply t first)."""
    parts: dict[int, PiecewiseWeight] = {}
    for p, ws in s.parts:
        for q, wt in t.parts:
            piece = ws.shift_index(q) * wt
            key = p + q
            parts[key] = parts.get(key, PiecewiseWeight()) + piece
    return GradedOperator(parts)


def power(t: GradedOperator, n: int) -> GradedOperator:
    if n < 1:
        raise AlgebraError("operator power needs n >= 1")
    out = t
    for _ in range(n - 1):
        out = compose(out, t)
    return out


def commutator(a: GradedOperator, b: GradedOperator) -> GradedOperator:
    return compose(a, b) - compose(b, a)


def equals(a: GradedOperator, b: GradedOperator) -> bool:
    """Equality as operators: identical weight values at every k >= 0.

    Eventual tails are compared as canonical rational functions (agreement on
    an arithmetic progression of integers forces equality); the finitely many
    indices below the last segment boundary are compared pointwise.
    """
    for degree in sorted(set(a.degrees) | set(b.degrees)):
        wa, wb = a.weight(degree), b.weight(degree)
        if wa.eventual_tail() != wb.eventual_tail():
            return False
        for k in range(0, max(wa.last_start(), wb.last_start())):
            if wa.value(k) != wb.value(k):
                return False
    return True


def to_matrix(op: GradedOperator, dim: int) -> list[list[GaussianRational]]:
    """Truncated (dim+1) x (dim+1) matrix; entry (k+p, k) is the weight."""
    if dim < 0:
        raise AlgebraError("matrix dimension must be nonnegative")
    out = [[GR_ZERO] * (dim + 1) for _ in range(dim + 1)]
    for degree, weight in op.parts:
        for k in range(0, dim + 1):
            row = k + degree
            if 0 <= row <= dim:
                out[row][k] = weight.value(k)
    return out


def toeplitz_symbol_of(op: GradedOperator) -> PolarSymbol:
    """Recover the admissible symbol whose Toeplitz operator is ``op``.

    Per degree p, the eventual tail W determines the candidate Mellin image
    phihat(z) = W(z-p-2)/(z+p); recovery succeeds iff the candidate has a
    radial preimage, the preimage is integrable, and rebuilding the operator
    reproduces every truncation segment of ``op``.  Raises NotToeplitzError
    otherwise.
    """
    parts = []
    for p, weight in op.parts:
        tail = weight.eventual_tail()
        candidate = tail.shift(-(p + 2)) / RationalFunction(Polynomial([p, 1]))
        try:
            radial = inverse_mellin(MellinImage(candidate))
        except (AlgebraError, NoRadialPreimageError) as exc:
            raise NotToeplitzError(
                f"not Toeplitz: no radial preimage at degree {p} ({exc})", p
            ) from exc
        report = is_admissible(radial)
        if not report:
            witness = report.witnesses[0]
            raise NotToeplitzError(
                f"not Toeplitz: non-admissible symbol at degree {p} "
                f"(witness exponent {witness[1]})",
                p,
                witness=witness,
            )
        rebuilt = from_symbol(PolarSymbol.quasihomogeneous(p, radial)).weight(p)
        if rebuilt.eventual_tail() != weight.eventual_tail():
            raise NotToeplitzError(
                f"not Toeplitz: eventual weight mismatch at degree {p}", p
            )
        for k in range(0, max(rebuilt.last_start(), weight.last_start())):
            if rebuilt.value(k) != weight.value(k):
                raise NotToeplitzError(
                    f"not Toeplitz: truncation mismatch at degree {p}, index {k}",
                    p,
                    index=k,
                )
        parts.append((p, radial))
    return PolarSymbol(parts)


@dataclass(frozen=True)
class SquareCheckResult:
    """Outcome of the Toeplitz-square test for g = e^{i theta} r^3 + tail."""

    is_toeplitz: bool
    symbol: PolarSymbol | None = None
    degree: int | None = None
    witness_exponent: Fraction | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.is_toeplitz


def square_check(g: PolarSymbol) -> SquareCheckResult:
    """Decide whether T_g^2 is itself a Toeplitz operator, for g of the shape
    e^{i theta} r^3 plus an anti-analytic polynomial sum a_l conj(z)^l."""
    _validate_square_shape(g)
    squared = compose(from_symbol(g), from_symbol(g))
    try:
        symbol = toeplitz_symbol_of(squared)
    except NotToeplitzError as exc:
        witness = exc.witness[1] if exc.witness else None
        return SquareCheckResult(
            False, degree=exc.degree, witness_exponent=witness, reason=str(exc)
        )
    return SquareCheckResult(True, symbol=symbol)


def _validate_square_shape(g: PolarSymbol) -> None:
    r3 = RadialSymbol.monomial(1, 3)
    if g.radial_part(1) != r3:
        raise AlgebraError("input symbol must have analytic part e(1)*r^3")
    for degree, radial in g.parts:
        if degree == 1:
            continue
        if degree >= 0:
            raise AlgebraError(f"unexpected degree {degree} in square-check input")
        l = -degree
        terms = radial.terms
        if len(terms) != 1 or terms[0][1] != l or terms[0][2] != 0:
            raise AlgebraError(
                f"degree {degree} part must be a multiple of conj(z)^{l}"
            )
