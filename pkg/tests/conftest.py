from fractions import Fraction

from hypothesis import strategies as st

from qhtoeplitz.exact import GaussianRational, Polynomial, RationalFunction
from qhtoeplitz.radial import RadialSymbol

small_fractions = st.fractions(
    min_value=-6, max_value=6, max_denominator=6
)

gaussian_rationals = st.builds(
    GaussianRational, small_fractions, small_fractions
)

real_rationals = st.builds(GaussianRational, small_fractions)


@st.composite
def polynomials(draw, max_degree=4, coeffs=gaussian_rationals):
    cs = draw(st.lists(coeffs, min_size=0, max_size=max_degree + 1))
    return Polynomial(cs)


@st.composite
def nonzero_polynomials(draw, max_degree=4, coeffs=gaussian_rationals):
    p = draw(polynomials(max_degree=max_degree, coeffs=coeffs))
    if p.is_zero:
        p = p + Polynomial([draw(st.integers(1, 5))])
    return p


@st.composite
def split_polynomials(draw, max_roots=3):
    """Monic polynomials that split into linear factors with small
    Gaussian-rational roots (the class the root finder certifies)."""
    roots = draw(st.lists(
        st.builds(GaussianRational,
                  st.fractions(min_value=-5, max_value=5, max_denominator=3),
                  st.sampled_from([Fraction(0), Fraction(0), Fraction(1), Fraction(-2)])),
        min_size=0, max_size=max_roots,
    ))
    out = Polynomial([1])
    for r in roots:
        out = out * Polynomial([-r, GaussianRational(Fraction(1))])
    return out


@st.composite
def rational_functions(draw, max_degree=3):
    num = draw(polynomials(max_degree=max_degree))
    den = draw(nonzero_polynomials(max_degree=max_degree))
    return RationalFunction(num, den)


@st.composite
def split_rational_functions(draw):
    """Rational functions whose numerator and denominator both split over the
    Gaussian rationals."""
    num = draw(split_polynomials())
    scale = draw(gaussian_rationals)
    den = draw(split_polynomials())
    return RationalFunction(num * (scale + GaussianRational(Fraction(7))), den)


@st.composite
def radial_symbols(draw, admissible_only=False, max_terms=3):
    n = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n):
        coeff = draw(gaussian_rationals)
        low = Fraction(-7, 4) if admissible_only else Fraction(-4)
        exponent = draw(st.fractions(min_value=low, max_value=8, max_denominator=4))
        log_power = draw(st.integers(0, 2))
        terms.append((coeff, exponent, log_power))
    return RadialSymbol(terms)
