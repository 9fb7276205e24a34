"""Commutant solver for T_g with g = e^{i theta} r^3 + sum_l a_l conj(z)^l.

Given an ansatz window [-L, N] for the unknown symbol f, the graded
components of [T_f, T_g] = 0 are solved degree by degree, descending from
d = N+1.  At degree d only the Mellin image of f_{d-1} is new, and the
infinite-index part of the component is a first-order rational difference
equation for the weight W_{d-1}(u) (u = 2k):

    R(u) W(u+2) - R(u+2d-2) W(u) = known brackets of higher families,

with R(u) = (u+4)/(u+6) the weight of T_{e^{i theta} r^3}.  The right-hand
side is linear in the free constants introduced so far, so each parameter
component is solved separately and the kernel contributes one new constant.

Two pruning rules produce linear constraints on the constants, exactly
mirroring the integrability and boundary arguments:

  * residues of any family member at a Mellin pole with real part >= 2
    correspond to non-integrable radial terms and must vanish;
  * the finitely many basis indices where some truncation segment is still
    active give scalar equations once the families are substituted back.

When the accumulated constraints force the top constant C_N to zero the
ansatz restarts at N-1, recording the elimination; the surviving pass yields
the solution space, a reconstructed symbol basis, and a classification of
each basis element as a polynomial in T_g.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .diffeq import DifferenceEquation, AffineFamily, _kernel, _particular
from .exact import (
    AlgebraError,
    GR_ONE,
    GR_ZERO,
    GaussianRational,
    Polynomial,
    RF_ZERO,
    RationalFunction,
    grat,
    partial_fractions,
    rref,
)
from .operators import GradedOperator, PolarSymbol, compose, equals, from_symbol, power
from .radial import RadialSymbol, inverse_mellin, is_admissible, mellin

STEP = Fraction(2)


def _lin(c) -> Polynomial:
    """The polynomial z + c."""
    return Polynomial([grat(c), GR_ONE])


# ---------------------------------------------------------------------------
# Linear bookkeeping over named free constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineScalar:
    """base + sum coeff * constant, with exact coefficients."""

    base: GaussianRational
    terms: tuple[tuple[str, GaussianRational], ...]

    def __init__(self, base=GR_ZERO, terms: Iterable = ()):
        merged: dict[str, GaussianRational] = {}
        for name, c in terms:
            acc = merged.get(name, GR_ZERO) + c
            merged[name] = acc
        object.__setattr__(self, "base", grat(base))
        object.__setattr__(
            self,
            "terms",
            tuple((n, c) for n, c in sorted(merged.items()) if not c.is_zero),
        )

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero and not self.terms

    def coeff(self, name: str) -> GaussianRational:
        for n, c in self.terms:
            if n == name:
                return c
        return GR_ZERO

    def __add__(self, other: "AffineScalar") -> "AffineScalar":
        return AffineScalar(self.base + other.base, self.terms + other.terms)

    def __sub__(self, other: "AffineScalar") -> "AffineScalar":
        return self + other.scale(-GR_ONE)

    def scale(self, f) -> "AffineScalar":
        f = grat(f)
        return AffineScalar(self.base * f, [(n, c * f) for n, c in self.terms])

    def __str__(self) -> str:
        parts = [] if self.base.is_zero else [str(self.base)]
        parts += [f"{c}*{n}" for n, c in self.terms]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class AffineRational:
    """base + sum constant * rational-function generator."""

    base: RationalFunction
    terms: tuple[tuple[str, RationalFunction], ...]

    def __init__(self, base=RF_ZERO, terms: Iterable = ()):
        merged: dict[str, RationalFunction] = {}
        for name, rf in terms:
            acc = merged.get(name, RF_ZERO) + rf
            merged[name] = acc
        object.__setattr__(self, "base", base)
        object.__setattr__(
            self,
            "terms",
            tuple((n, rf) for n, rf in sorted(merged.items()) if not rf.is_zero),
        )

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero and not self.terms

    def components(self) -> list[tuple[str | None, RationalFunction]]:
        out: list[tuple[str | None, RationalFunction]] = []
        if not self.base.is_zero:
            out.append((None, self.base))
        out.extend(self.terms)
        return out

    def __add__(self, other: "AffineRational") -> "AffineRational":
        return AffineRational(self.base + other.base, self.terms + other.terms)

    def __sub__(self, other: "AffineRational") -> "AffineRational":
        return self + other.scale_rf(RationalFunction(-1))

    def scale_rf(self, rf: RationalFunction) -> "AffineRational":
        return AffineRational(self.base * rf, [(n, g * rf) for n, g in self.terms])

    def shift(self, h) -> "AffineRational":
        return AffineRational(
            self.base.shift(h), [(n, g.shift(h)) for n, g in self.terms]
        )

    def evaluate(self, x) -> AffineScalar:
        return AffineScalar(
            self.base.evaluate(x), [(n, g.evaluate(x)) for n, g in self.terms]
        )

    def assign(self, values: Mapping[str, GaussianRational]) -> RationalFunction:
        out = self.base
        for name, gen in self.terms:
            v = values.get(name, GR_ZERO)
            if not v.is_zero:
                out = out + gen * RationalFunction.constant(v)
        return out

    def as_family(self) -> AffineFamily:
        return AffineFamily(self.base, self.terms)

    def __str__(self) -> str:
        parts = [] if self.base.is_zero else [str(self.base)]
        parts += [f"{n}*({g})" for n, g in self.terms]
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Problem statement and ledger
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CommutantProblem:
    """g's anti-analytic coefficients a_1..a_depth plus the ansatz window.

    The window [-L, N] must satisfy depth >= N + L so every graded equation
    the solver asserts only references known coefficients.
    """

    g_tail: tuple[GaussianRational, ...]
    ansatz_top: int
    ansatz_depth: int

    def __init__(self, g_tail: Iterable, ansatz_top: int, ansatz_depth: int):
        tail = tuple(grat(a) for a in g_tail)
        if ansatz_top < 1:
            raise AlgebraError("ansatz top degree must be >= 1")
        if ansatz_depth < 0:
            raise AlgebraError("ansatz depth must be >= 0")
        if len(tail) < ansatz_top + ansatz_depth:
            raise AlgebraError(
                "depth_g too small: need at least ansatz_top + ansatz_depth "
                f"coefficients, got {len(tail)}"
            )
        object.__setattr__(self, "g_tail", tail)
        object.__setattr__(self, "ansatz_top", int(ansatz_top))
        object.__setattr__(self, "ansatz_depth", int(ansatz_depth))

    @property
    def depth(self) -> int:
        return len(self.g_tail)

    def coefficient(self, l: int) -> GaussianRational:
        return self.g_tail[l - 1]

    def g_symbol(self) -> PolarSymbol:
        parts = [(1, RadialSymbol.monomial(1, 3))]
        for l, a in enumerate(self.g_tail, start=1):
            if not a.is_zero:
                parts.append((-l, RadialSymbol.monomial(a, l)))
        return PolarSymbol(parts)


@dataclass(frozen=True)
class LedgerEntry:
    """One linear equation over the free constants, with provenance.

    ``raw`` is the harvested equation; ``reduced`` is the same equation
    modulo the constraints recorded before it, both normalized so the
    earliest-introduced constant carries coefficient 1.
    """

    raw: tuple[tuple[str, GaussianRational], ...]
    reduced: tuple[tuple[str, GaussianRational], ...]
    rule: str
    degree: int
    detail: str
    ansatz: int

    def raw_dict(self) -> dict[str, GaussianRational]:
        return dict(self.raw)

    def reduced_dict(self) -> dict[str, GaussianRational]:
        return dict(self.reduced)

    def __str__(self) -> str:
        eq = " + ".join(f"{c}*{n}" for n, c in self.reduced) or "0"
        return (
            f"[N={self.ansatz} d={self.degree} {self.rule} {self.detail}] {eq} = 0"
        )


class ConstraintLedger:
    """Ordered log of constraint equations plus an exact reduction state.

    Constraints are stored by name and re-vectorized on demand, since the
    parameter list grows as the pass descends.  Columns are ordered newest
    parameter first, so pivots consume the most recently introduced constants
    and the long-lived C's stay free.
    """

    def __init__(self, params: list[str]):
        self.params = params  # introduction order, shared with the pass
        self.entries: list[LedgerEntry] = []
        self._constraints: list[dict[str, GaussianRational]] = []

    def _vector(self, eq: Mapping[str, GaussianRational],
                order: list[str]) -> list[GaussianRational]:
        return [grat(eq.get(name, GR_ZERO)) for name in order]

    def _echelon(self):
        order = list(reversed(self.params))
        rows = [self._vector(c, order) for c in self._constraints]
        red, pivots = rref(rows) if rows else ([], [])
        return red, pivots, order

    def _reduce_dict(self, eq: Mapping[str, GaussianRational]
                     ) -> dict[str, GaussianRational]:
        red, pivots, order = self._echelon()
        vec = self._vector(eq, order)
        for row, pc in zip(red, pivots):
            if not vec[pc].is_zero:
                f = vec[pc]
                vec = [a - f * b for a, b in zip(vec, row)]
        return {n: c for n, c in zip(order, vec) if not c.is_zero}

    def _normalize(self, eq: Mapping[str, GaussianRational]) -> tuple:
        if not eq:
            return ()
        lead = next(name for name in self.params if name in eq)
        inv = grat(eq[lead]).inverse()
        return tuple(sorted((n, c * inv) for n, c in eq.items()))

    def add(self, scalar: AffineScalar, rule: str, degree: int, detail: str,
            ansatz: int) -> LedgerEntry | None:
        if not scalar.base.is_zero:
            raise AlgebraError("constraints must be homogeneous in the constants")
        raw = {n: c for n, c in scalar.terms}
        if not raw:
            return None
        reduced = self._reduce_dict(raw)
        entry = LedgerEntry(
            raw=self._normalize(raw),
            reduced=self._normalize(reduced),
            rule=rule,
            degree=degree,
            detail=detail,
            ansatz=ansatz,
        )
        self.entries.append(entry)
        if reduced:
            self._constraints.append(raw)
        return entry

    def forces_zero(self, name: str) -> bool:
        """True when the recorded constraints imply name = 0."""
        return not self._reduce_dict({name: GR_ONE})

    def solution_basis(self) -> list[dict[str, GaussianRational]]:
        """A basis of the constant space cut out by the constraints, one
        assignment per surviving free constant."""
        red, pivots, order = self._echelon()
        free_cols = [c for c in range(len(self.params)) if c not in pivots]
        basis = []
        for fc in free_cols:
            vec = [GR_ZERO] * len(self.params)
            vec[fc] = GR_ONE
            for row, pc in zip(red, pivots):
                vec[pc] = -row[fc]
            basis.append({n: v for n, v in zip(order, vec) if not v.is_zero})
        # report in introduction order of the free constant
        basis.sort(key=lambda a: min(self.params.index(n) for n in a))
        return basis


# ---------------------------------------------------------------------------
# Graded degree equations
# ---------------------------------------------------------------------------

def _param_name(ansatz: int, n: int) -> str:
    if n == ansatz:
        return f"C_{ansatz}"
    if n == ansatz - 1:
        return f"C_{ansatz - 1}"
    return f"B_{{{ansatz},{n}}}"


def _analytic_weight() -> RationalFunction:
    """Weight of T_{e^{i theta} r^3} in u = 2k: (u+4)/(u+6)."""
    return RationalFunction(_lin(4), _lin(6))


def _tail_weight(problem: CommutantProblem, l: int) -> RationalFunction:
    """Weight of T_{a_l conj(z)^l} in u = 2k: a_l (u-2l+2)/(u+2), from k = l."""
    return RationalFunction(_lin(2 - 2 * l), _lin(2)) * RationalFunction.constant(
        problem.coefficient(l)
    )


def _weight_of_family(fhat: AffineRational, n: int) -> AffineRational:
    """W_n(u) = (u + 2n + 2) fhat_n(u + n + 2)."""
    return fhat.shift(n + 2).scale_rf(RationalFunction(_lin(2 * n + 2)))


def _family_from_weight(w: AffineRational, n: int) -> AffineRational:
    """Invert _weight_of_family: fhat_n(z) = W(z - n - 2)/(z + n)."""
    return w.shift(-(n + 2)).scale_rf(RationalFunction(1) / RationalFunction(_lin(n)))


@dataclass(frozen=True)
class DegreePiece:
    """One signed product in a graded commutator component."""

    sign: int
    start: int
    tail: AffineRational


@dataclass(frozen=True)
class DegreeEquation:
    """Degree-d component of the commutator equations, split into the
    difference equation for the new unknown and the exact piecewise data."""

    degree: int
    a: RationalFunction
    b: RationalFunction
    rhs: AffineRational

    def component_equations(self) -> list[tuple[str | None, DifferenceEquation]]:
        return [
            (name, DifferenceEquation(self.a, self.b, rf, STEP))
            for name, rf in self.rhs.components()
        ]


def _bracket_pieces(problem: CommutantProblem, d: int,
                    upstream: Mapping[int, AffineRational],
                    ansatz: int) -> list[DegreePiece]:
    """Signed products from the brackets with the anti-analytic tail parts,
    for l = 1..N-d (the degree-d component without the unknown's bracket)."""
    pieces = []
    for l in range(1, ansatz - d + 1):
        n = d + l
        if n not in upstream:
            raise AlgebraError(f"family for degree {n} not solved yet")
        g_l = _tail_weight(problem, l)
        if g_l.is_zero:
            continue
        start_n = max(0, -n)
        w_n = _weight_of_family(upstream[n], n)
        pieces.append(DegreePiece(1, l + start_n, w_n.shift(-2 * l).scale_rf(g_l)))
        pieces.append(
            DegreePiece(-1, max(start_n, -d, 0), w_n.scale_rf(g_l.shift(2 * n)))
        )
    return pieces


def _rhs_from_brackets(brackets: list[DegreePiece]) -> AffineRational:
    rhs = AffineRational()
    for p in brackets:
        rhs = rhs - p.tail if p.sign > 0 else rhs + p.tail
    return rhs


def degree_equation(problem: CommutantProblem, d: int,
                    upstream: Mapping[int, AffineRational],
                    ansatz: int | None = None) -> DegreeEquation:
    """The degree-d graded identity as a difference equation for W_{d-1}.

    Requires all families f_{d+l}, l = 1..N-d, already solved (descending
    sweep).  The right-hand side is linear in the constants carried by the
    upstream families.
    """
    n_top = ansatz if ansatz is not None else problem.ansatz_top
    r = _analytic_weight()
    rhs = _rhs_from_brackets(_bracket_pieces(problem, d, upstream, n_top))
    return DegreeEquation(degree=d, a=r, b=-r.shift(2 * d - 2), rhs=rhs)


def _solve_degree(eq: DegreeEquation, kernel_name: str) -> AffineRational:
    """Solve the degree equation component by component; the kernel adds the
    new free constant.  Rational solvability is guaranteed along the ladder,
    so a missing particular solution is an internal error."""
    terms = []
    for name, rf in eq.rhs.components():
        part = _particular(eq.a, eq.b, rf, STEP)
        if part is None:
            raise AlgebraError(
                f"no rational particular solution at degree {eq.degree} "
                f"for component {name or 'base'}"
            )
        terms.append((name, part))
    base = RF_ZERO
    for i, (name, part) in enumerate(terms):
        if name is None:
            base = part
            terms.pop(i)
            break
    gens = _kernel(eq.a, eq.b, STEP)
    if gens:
        terms.append((kernel_name, gens[0]))
    return AffineRational(base, terms)


def _own_pieces(d: int, families: Mapping[int, AffineRational]) -> list[DegreePiece]:
    """The unknown's own bracket [T_{f_{d-1}}, T_{e^{i theta} r^3}]."""
    r = _analytic_weight()
    n0 = d - 1
    start0 = max(0, -n0)
    w0 = _weight_of_family(families[n0], n0)
    return [
        DegreePiece(1, max(0, start0 - 1), w0.shift(2).scale_rf(r)),
        DegreePiece(-1, max(0, 1 - d), w0.scale_rf(r.shift(2 * d - 2))),
    ]


def _degree_pieces(problem: CommutantProblem, d: int,
                   families: Mapping[int, AffineRational],
                   ansatz: int) -> list[DegreePiece]:
    """All signed products forming the degree-d component of [T_f, T_g],
    with exact truncation starts."""
    return _own_pieces(d, families) + _bracket_pieces(problem, d, families, ansatz)


def admissibility_constraints(fhat: AffineRational) -> list[tuple[AffineScalar, str]]:
    """Linear equations killing every partial-fraction coefficient of the
    family at poles with real part >= 2 (radial exponent <= -2).

    Returned in order of descending pole, then descending order."""
    table: dict[tuple[Fraction, Fraction, int], list[tuple[str | None, GaussianRational]]] = {}
    for name, rf in fhat.components():
        for pole, order, coeff in partial_fractions(rf).terms:
            if pole.re < 2:
                continue
            key = (pole.re, pole.im, order)
            table.setdefault(key, []).append((name, coeff))
    out = []
    for key in sorted(table, reverse=True):
        re, im, order = key
        base = GR_ZERO
        terms = []
        for name, coeff in table[key]:
            if name is None:
                base = base + coeff
            else:
                terms.append((name, coeff))
        pole = GaussianRational(re, im)
        detail = f"pole {pole}" + (f" order {order}" if order > 1 else "")
        out.append((AffineScalar(base, terms), detail))
    return out


def _boundary_scalars(pieces: list[DegreePiece], d: int
                      ) -> list[tuple[AffineScalar, str]]:
    k_lo = max(0, -d)
    k_hi = max(p.start for p in pieces)
    out = []
    for k in range(k_lo, k_hi):
        total = AffineScalar()
        for p in pieces:
            if k >= p.start:
                v = p.tail.evaluate(2 * k)
                total = total + (v if p.sign > 0 else v.scale(-GR_ONE))
        if not total.is_zero:
            out.append((total, f"k={k}"))
    return out


def _check_tail_identity(pieces: list[DegreePiece], d: int) -> None:
    tail_sum = AffineRational()
    for p in pieces:
        tail_sum = tail_sum + (
            p.tail if p.sign > 0 else p.tail.scale_rf(RationalFunction(-1))
        )
    if not tail_sum.is_zero:
        raise AlgebraError(f"degree {d} tail identity violated: {tail_sum}")


def boundary_constraints(problem: CommutantProblem, d: int,
                         families: Mapping[int, AffineRational],
                         ansatz: int | None = None
                         ) -> list[tuple[AffineScalar, str]]:
    """Scalar equations from evaluating the exact piecewise degree-d
    component at every index below the last truncation boundary."""
    n_top = ansatz if ansatz is not None else problem.ansatz_top
    pieces = _degree_pieces(problem, d, families, n_top)
    out = _boundary_scalars(pieces, d)
    # beyond every boundary the rational identity itself must hold
    _check_tail_identity(pieces, d)
    return out


# ---------------------------------------------------------------------------
# The ladder
# ---------------------------------------------------------------------------

@dataclass
class PassResult:
    ansatz: int
    params: list[str]
    families: dict[int, AffineRational]
    ledger: ConstraintLedger
    eliminated: bool
    eliminated_at_degree: int | None = None


def _anchor_particular(d: int, families: dict[int, AffineRational],
                       kernel_name: str,
                       scalars: list[tuple[AffineScalar, str]]) -> bool:
    """Pin the particular solution at degree d to the presentation in which
    the first truncation-boundary identity holds with all constants zero.

    The solver's particular is only determined modulo the kernel; the named
    free constants are conventionally attached to the presentation whose
    particular satisfies the lowest boundary evaluation exactly.  When that
    evaluation carries a nonzero kernel coefficient it pins the choice, and
    every other generator is shifted by the matching kernel multiple."""
    fam = families[d - 1]
    kappa = next((g for n, g in fam.terms if n == kernel_name), None)
    if kappa is None:
        return False
    for scalar, _ in scalars:
        c_kernel = scalar.coeff(kernel_name)
        if c_kernel.is_zero:
            continue
        inv = c_kernel.inverse()
        new_terms = []
        for name, gen in fam.terms:
            if name == kernel_name:
                new_terms.append((name, gen))
            else:
                shift = scalar.coeff(name) * inv
                new_terms.append((name, gen - kappa * RationalFunction.constant(shift)))
        base = fam.base - kappa * RationalFunction.constant(scalar.base * inv)
        families[d - 1] = AffineRational(base, new_terms)
        return True
    return False


def run_pass(problem: CommutantProblem, ansatz: int) -> PassResult:
    """One descending sweep at a fixed top degree.  Stops early (eliminated)
    as soon as the constraints force the top constant to zero."""
    params: list[str] = []
    ledger = ConstraintLedger(params)
    families: dict[int, AffineRational] = {}
    top_name = _param_name(ansatz, ansatz)
    r = _analytic_weight()
    for d in range(ansatz + 1, -problem.ansatz_depth, -1):
        name = _param_name(ansatz, d - 1)
        brackets = _bracket_pieces(problem, d, families, ansatz)
        eq = DegreeEquation(
            degree=d, a=r, b=-r.shift(2 * d - 2), rhs=_rhs_from_brackets(brackets)
        )
        w = _solve_degree(eq, name)
        params.append(name)
        families[d - 1] = _family_from_weight(w, d - 1)
        pieces = _own_pieces(d, families) + brackets
        if _anchor_particular(d, families, name, _boundary_scalars(pieces, d)):
            pieces = _own_pieces(d, families) + brackets
        _check_tail_identity(pieces, d)
        for scalar, detail in admissibility_constraints(families[d - 1]):
            ledger.add(scalar, "residue", d, detail, ansatz)
        if ledger.forces_zero(top_name):
            return PassResult(ansatz, params, families, ledger, True, d)
        for scalar, detail in _boundary_scalars(pieces, d):
            ledger.add(scalar, "boundary", d, detail, ansatz)
        if ledger.forces_zero(top_name):
            return PassResult(ansatz, params, families, ledger, True, d)
    return PassResult(ansatz, params, families, ledger, False)


@dataclass
class SolveReport:
    """Everything the ladder produced: final families, the surviving constant
    space, reconstructed symbols, classification, and the audit trail."""

    problem: CommutantProblem
    final_ansatz: int
    families: dict[int, AffineFamily]
    params: list[str]
    entries: list[LedgerEntry]
    trace: list[str]
    dimension: int
    basis_params: list[str]
    basis_assignments: list[dict[str, GaussianRational]]
    basis: list[PolarSymbol]
    classification: list[dict[int, GaussianRational] | None]
    assumption_flags: list[str]
    tail_extended: bool
    window_verified_depth: int

    def classification_strings(self) -> list[str]:
        out = []
        for coeffs in self.classification:
            if coeffs is None:
                out.append("not a polynomial in Tg")
                continue
            parts = []
            for j in sorted(coeffs, reverse=True):
                c = coeffs[j]
                term = "I" if j == 0 else ("Tg" if j == 1 else f"Tg^{j}")
                parts.append(f"{c}*{term}")
            out.append(" + ".join(parts) if parts else "0")
        return out


def solve_ladder(problem: CommutantProblem) -> SolveReport:
    """Run the elimination ladder from the requested ansatz down to the
    surviving top degree, then reconstruct and classify the solution space."""
    entries: list[LedgerEntry] = []
    trace: list[str] = []
    ansatz = problem.ansatz_top
    final: PassResult | None = None
    while ansatz >= 1:
        res = run_pass(problem, ansatz)
        entries.extend(res.ledger.entries)
        if res.eliminated:
            trace.append(
                f"ansatz N={ansatz}: top constant C_{ansatz} forced to zero "
                f"at degree {res.eliminated_at_degree}; restarting with N={ansatz - 1}"
            )
            ansatz -= 1
            continue
        trace.append(f"ansatz N={ansatz}: survives")
        final = res
        break
    if final is None:
        raise AlgebraError("every ansatz down to N=1 was eliminated")

    assignments = final.ledger.solution_basis()
    basis_params = [
        min(a, key=lambda n: final.params.index(n)) for a in assignments
    ]
    basis, tail_extended = _reconstruct_basis(problem, final, assignments)
    classification = _classify_basis(problem, final.ansatz, basis)

    flags = []
    if not any(
        not problem.coefficient(l).is_zero for l in range(5, problem.depth + 1)
    ):
        flags.append("no nonzero tail coefficient a_l with l >= 5")
    for l in range(1, min(4, problem.depth) + 1):
        if problem.coefficient(l).is_zero:
            flags.append(f"tail coefficient a_{l} is zero")

    return SolveReport(
        problem=problem,
        final_ansatz=final.ansatz,
        families={n: fam.as_family() for n, fam in final.families.items()},
        params=final.params,
        entries=entries,
        trace=trace,
        dimension=len(assignments),
        basis_params=basis_params,
        basis_assignments=assignments,
        basis=basis,
        classification=classification,
        assumption_flags=flags,
        tail_extended=tail_extended,
        window_verified_depth=problem.ansatz_depth,
    )


def _reconstruct_basis(problem: CommutantProblem, final: PassResult,
                       assignments) -> tuple[list[PolarSymbol], bool]:
    basis = []
    tail_extended = False
    for assignment in assignments:
        parts = []
        for n in sorted(final.families):
            rf = final.families[n].assign(assignment)
            if rf.is_zero:
                continue
            radial = inverse_mellin(rf)
            if not is_admissible(radial):
                raise AlgebraError(
                    f"reconstructed family at degree {n} is not integrable"
                )
            parts.append((n, radial))
        symbol = PolarSymbol(parts)
        # When the window pattern f_{-l} = c a_l r^l holds throughout, extend
        # it across the rest of g's tail (verified on the window only).
        if final.ansatz == 1 and problem.depth > problem.ansatz_depth:
            c1 = assignment.get("C_1", GR_ZERO)
            if not c1.is_zero and _window_tail_matches(problem, symbol, c1):
                extra = []
                for l in range(problem.ansatz_depth + 1, problem.depth + 1):
                    a = problem.coefficient(l)
                    if not a.is_zero:
                        extra.append((-l, RadialSymbol.monomial(c1 * a, l)))
                symbol = symbol + PolarSymbol(extra)
                tail_extended = True
        basis.append(symbol)
    return basis, tail_extended


def _window_tail_matches(problem: CommutantProblem, symbol: PolarSymbol,
                         c1: GaussianRational) -> bool:
    for l in range(1, problem.ansatz_depth + 1):
        expected = RadialSymbol.monomial(c1 * problem.coefficient(l), l)
        if symbol.radial_part(-l) != expected:
            return False
    return True


def classify(basis: list[PolarSymbol], g: PolarSymbol,
             max_power: int) -> list[dict[int, GaussianRational] | None]:
    """Express each basis element's operator as sum_j c_j (T_g)^j by exact
    weight matching, degree by degree; None when no such polynomial exists."""
    tg = from_symbol(g)
    powers = [GradedOperator.identity()]
    for _ in range(max_power):
        powers.append(compose(powers[-1], tg))
    out = []
    for symbol in basis:
        target = from_symbol(symbol)
        out.append(_match_operator(target, powers))
    return out


def _classify_basis(problem, final_ansatz, basis):
    return classify(basis, problem.g_symbol(), max_power=max(1, final_ansatz))


def _match_operator(target: GradedOperator, powers: list[GradedOperator]
                    ) -> dict[int, GaussianRational] | None:
    """Solve sum_j c_j powers[j] = target exactly, or report impossibility."""
    rows: list[list[GaussianRational]] = []
    rhs: list[GaussianRational] = []
    degrees = set(target.degrees)
    for p in powers:
        degrees.update(p.degrees)
    for degree in sorted(degrees):
        weights = [p.weight(degree) for p in powers]
        tw = target.weight(degree)
        starts = {s for w in weights + [tw] for s, _ in w.segments}
        starts.add(0)
        boundary = max(max((w.last_start() for w in weights + [tw]), default=0), 0)
        # pointwise equations below the last boundary
        for k in range(0, boundary):
            rows.append([w.value(k) for w in weights])
            rhs.append(tw.value(k))
        # beyond it, the eventual tails must agree as rational functions
        tails = [w.eventual_tail() for w in weights]
        target_tail = tw.eventual_tail()
        den = Polynomial([GR_ONE])
        for t in tails + [target_tail]:
            den = den * t.den
        num_cols = [(t * RationalFunction(den)).num for t in tails]
        num_rhs = (target_tail * RationalFunction(den)).num
        top = max([c.degree for c in num_cols] + [num_rhs.degree, 0])
        for j in range(top + 1):
            rows.append([c.coeff(j) for c in num_cols])
            rhs.append(num_rhs.coeff(j))
    from .exact import solve_linear

    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    result = {j: c for j, c in enumerate(sol) if not c.is_zero}
    # verify exactly; solve_linear ignores redundant rows' consistency only
    # when the system is solvable, so recheck by reconstruction
    acc = GradedOperator()
    for j, c in result.items():
        acc = acc + powers[j].scale(c)
    if not equals(acc, target):
        return None
    return result
