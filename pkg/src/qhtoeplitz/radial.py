"""Radial symbols r^a (log r)^m, their exact Mellin transforms, inverse
Mellin reconstruction, and the L^1([0,1), r dr) admissibility test.

The Mellin transform used here is F(z) = integral_0^1 phi(r) r^(z-1) dr.  On
the monomial class it is rational:

    M[r^a (log r)^m](z) = (-1)^m m! / (z + a)^(m+1)

so transforms of finite sums land in proper rational functions with
Gaussian-rational poles, and partial fractions inverts the map exactly.
A term r^a (log r)^m is integrable against r dr iff a > -2; the log factor
never moves the threshold.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .exact import (
    AlgebraError,
    GR_ONE,
    GaussianRational,
    Polynomial,
    RationalFunction,
    grat,
    partial_fractions,
)


class NoRadialPreimageError(AlgebraError):
    """Raised when a rational function is not the transform of any symbol in
    the r^a (log r)^m class."""


@dataclass(frozen=True)
class RadialSymbol:
    """Finite sum of terms coeff * r^exponent * (log r)^log_power.

    Terms are stored sorted with distinct (exponent, log_power) pairs and
    nonzero coefficients; the empty sum is the zero symbol.
    """

    terms: tuple[tuple[GaussianRational, Fraction, int], ...]

    def __init__(self, terms: Iterable = ()):
        merged: dict[tuple[Fraction, int], GaussianRational] = {}
        for coeff, exponent, log_power in terms:
            coeff = grat(coeff)
            exponent = Fraction(exponent)
            log_power = int(log_power)
            if log_power < 0:
                raise AlgebraError("negative log power")
            key = (exponent, log_power)
            acc = merged.get(key)
            merged[key] = coeff if acc is None else acc + coeff
        out = tuple(
            (c, e, m)
            for (e, m), c in sorted(merged.items())
            if not c.is_zero
        )
        object.__setattr__(self, "terms", out)

    # -- structure -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @staticmethod
    def monomial(coeff, exponent, log_power: int = 0) -> "RadialSymbol":
        return RadialSymbol([(grat(coeff), Fraction(exponent), log_power)])

    @staticmethod
    def constant(coeff) -> "RadialSymbol":
        return RadialSymbol.monomial(coeff, 0)

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other: "RadialSymbol") -> "RadialSymbol":
        return RadialSymbol(self.terms + other.terms)

    def __sub__(self, other: "RadialSymbol") -> "RadialSymbol":
        return self + (-other)

    def __neg__(self) -> "RadialSymbol":
        return RadialSymbol([(-c, e, m) for c, e, m in self.terms])

    def scale(self, factor) -> "RadialSymbol":
        factor = grat(factor)
        return RadialSymbol([(c * factor, e, m) for c, e, m in self.terms])

    def evaluate(self, r: float) -> complex:
        """Numeric value at 0 < r < 1 (used by quadrature cross-checks)."""
        out = 0j
        lr = math.log(r)
        for c, e, m in self.terms:
            out += complex(c) * r ** float(e) * lr**m
        return out

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for c, e, m in self.terms:
            piece = f"{c}*r^{e}"
            if m:
                piece += f"*log(r)^{m}"
            parts.append(piece)
        return " + ".join(parts)


@dataclass(frozen=True)
class MellinImage:
    """Mellin transform of a radial symbol: a proper rational function of the
    transform variable."""

    value: RationalFunction

    def __post_init__(self):
        if not self.value.is_zero and not self.value.is_proper:
            raise AlgebraError("Mellin images are proper rational functions")

    def evaluate(self, x) -> GaussianRational:
        return self.value.evaluate(x)


def mellin(phi: RadialSymbol) -> MellinImage:
    """Exact Mellin transform, termwise by the monomial rule above.

    Total on the whole class: the result is the rational continuation even
    when some exponent makes the defining integral diverge at low Re z;
    integrability is a separate question (see is_admissible).
    """
    out = RationalFunction(Polynomial())
    for c, e, m in phi.terms:
        sign = -GR_ONE if m % 2 else GR_ONE
        num = Polynomial.constant(c * sign * math.factorial(m))
        den = Polynomial([grat(e), GR_ONE]) ** (m + 1)
        out = out + RationalFunction(num, den)
    return MellinImage(out)


def inverse_mellin(image: MellinImage | RationalFunction) -> RadialSymbol:
    """The unique preimage of a proper rational function with rational poles:
    coeff/(z+a)^(m+1) pulls back to coeff * (-1)^m/m! * r^a (log r)^m."""
    value = image.value if isinstance(image, MellinImage) else image
    if value.is_zero:
        return RadialSymbol()
    if not value.is_proper:
        raise NoRadialPreimageError("no radial preimage: improper rational function")
    pf = partial_fractions(value)
    terms = []
    for pole, order, coeff in pf.terms:
        if pole.im != 0:
            raise NoRadialPreimageError(f"no radial preimage: complex pole {pole}")
        m = order - 1
        sign = -GR_ONE if m % 2 else GR_ONE
        terms.append((coeff * sign / math.factorial(m), -pole.re, m))
    return RadialSymbol(terms)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the L^1([0,1), r dr) test, with the offending terms as
    witnesses when it fails."""

    admissible: bool
    witnesses: tuple[tuple[GaussianRational, Fraction, int], ...] = ()

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible(phi: RadialSymbol) -> AdmissibilityReport:
    """True iff every term has exponent > -2.

    Equivalently: the Mellin transform is analytic on Re z >= 2 (each term
    r^a ... contributes its poles at z = -a).
    """
    bad = tuple(t for t in phi.terms if t[1] <= -2)
    return AdmissibilityReport(not bad, bad)
