"""Generalized position/momentum observables and their uncertainty bounds.

Within one sector the quadratic observables

    L  = -(a+b + b+a)/2          A  = i(a+b - b+a)/2
    L~ = -(ba+ + ab+)/2          A~ = i(ba+ - ab+)/2

play the role of position and momentum (for the x^n family L is a
Lagrangian-type operator and A the classical action variable).  On the
direct sum of the two sectors the first-order block operators

    X = [[0, a+ + b+], [a + b, 0]] / sqrt(2)
    P = -i [[0, a+ - b+], [-a + b, 0]] / sqrt(2)

generalize the usual position and momentum.  Robertson's inequality
sigma_F sigma_G >= |<[F, G]>| / 2 then yields

    sigma_L  sigma_A  >= (delta-gamma) |gamma| / 4   (minimised by the PSI ground state)
    sigma_L~ sigma_A~ >= (delta-gamma) delta / 4     (minimised by the PHI_TILDE ground state)
    sigma_X  sigma_P  >= min(|gamma|, delta) / 2

with the per-state X-P Robertson bound equal to the exact convex
combination (|gamma| ||psi1||^2 + delta ||psi2||^2) / 2.

Observables are formal complex-rational combinations of generator words;
every expectation is assembled exactly (GammaVectors bucketed by the parity
of the accumulated sqrt(2) powers) and only evaluated numerically at the
end.  Quantities that vanish identically on real-coefficient states, like
<A>, are still routed through the full computation so that a wrong sign in
any word would surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .calculus import (
    GammaVector,
    GaussPolyState,
    Generator,
    apply_word,
    evaluate_gamma_vector,
    inner_product,
)
from .systems import CoupledSusySystem
from .towers import EigenstateRecord


class SectorDomainError(ValueError):
    """A sector observable was evaluated on a state outside its residue classes."""


@dataclass(frozen=True)
class WordTerm:
    """(re + i im) * 2^(-sqrt2_pow/2) times a generator word."""

    re: Fraction
    im: Fraction
    sqrt2_pow: int
    word: tuple


@dataclass(frozen=True)
class OperatorExpression:
    """A formal complex-rational combination of generator words.

    `sector` is 1 or 2 for within-sector observables (enforced on states),
    or None for the direct-sum blocks which transfer between sectors.
    """

    name: str
    terms: tuple
    sector: int | None = None

    def compose(self, other: "OperatorExpression", name: str | None = None) -> "OperatorExpression":
        """Operator product self . other (other acts first)."""
        out = []
        for t1 in self.terms:
            for t2 in other.terms:
                re = t1.re * t2.re - t1.im * t2.im
                im = t1.re * t2.im + t1.im * t2.re
                out.append(
                    WordTerm(re, im, t1.sqrt2_pow + t2.sqrt2_pow, t1.word + t2.word)
                )
        return OperatorExpression(
            name or f"{self.name}.{other.name}", tuple(out), self.sector
        )

    def minus(self, other: "OperatorExpression", name: str | None = None) -> "OperatorExpression":
        negated = tuple(WordTerm(-t.re, -t.im, t.sqrt2_pow, t.word) for t in other.terms)
        return OperatorExpression(
            name or f"{self.name}-{other.name}", self.terms + negated, self.sector
        )

    def commutator_with(self, other: "OperatorExpression", name: str | None = None):
        return self.compose(other).minus(
            other.compose(self), name or f"[{self.name},{other.name}]"
        )


_A, _AD, _B, _BD = Generator.A, Generator.ADAG, Generator.B, Generator.BDAG

_HALF = Fraction(1, 2)
_ZERO = Fraction(0)


def observable_L() -> OperatorExpression:
    return OperatorExpression(
        "L",
        (
            WordTerm(-_HALF, _ZERO, 0, (_AD, _B)),
            WordTerm(-_HALF, _ZERO, 0, (_BD, _A)),
        ),
        sector=1,
    )


def observable_A() -> OperatorExpression:
    return OperatorExpression(
        "A",
        (
            WordTerm(_ZERO, _HALF, 0, (_AD, _B)),
            WordTerm(_ZERO, -_HALF, 0, (_BD, _A)),
        ),
        sector=1,
    )


def observable_L_tilde() -> OperatorExpression:
    return OperatorExpression(
        "L~",
        (
            WordTerm(-_HALF, _ZERO, 0, (_B, _AD)),
            WordTerm(-_HALF, _ZERO, 0, (_A, _BD)),
        ),
        sector=2,
    )


def observable_A_tilde() -> OperatorExpression:
    return OperatorExpression(
        "A~",
        (
            WordTerm(_ZERO, _HALF, 0, (_B, _AD)),
            WordTerm(_ZERO, -_HALF, 0, (_A, _BD)),
        ),
        sector=2,
    )


def x_block(which: str) -> OperatorExpression:
    """Off-diagonal blocks of X: "12" = (a+ + b+)/sqrt(2), "21" = (a + b)/sqrt(2)."""
    one = Fraction(1)
    if which == "12":
        terms = (WordTerm(one, _ZERO, 1, (_AD,)), WordTerm(one, _ZERO, 1, (_BD,)))
    elif which == "21":
        terms = (WordTerm(one, _ZERO, 1, (_A,)), WordTerm(one, _ZERO, 1, (_B,)))
    else:
        raise ValueError("block must be '12' or '21'")
    return OperatorExpression(f"X{which}", terms)


def p_block(which: str) -> OperatorExpression:
    """Off-diagonal blocks of P: "12" = -i(a+ - b+)/sqrt(2), "21" = -i(-a + b)/sqrt(2)."""
    one = Fraction(1)
    if which == "12":
        terms = (WordTerm(_ZERO, -one, 1, (_AD,)), WordTerm(_ZERO, one, 1, (_BD,)))
    elif which == "21":
        terms = (WordTerm(_ZERO, one, 1, (_A,)), WordTerm(_ZERO, -one, 1, (_B,)))
    else:
        raise ValueError("block must be '12' or '21'")
    return OperatorExpression(f"P{which}", terms)


# ---------------------------------------------------------------------------
# Exact expectation machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactMatrixElement:
    """<f | expr | g> as exact GammaVectors, bucketed by residual sqrt(2) parity.

    value = re_even + re_odd / sqrt(2) + i (im_even + im_odd / sqrt(2)).
    """

    re_even: GammaVector
    re_odd: GammaVector
    im_even: GammaVector
    im_odd: GammaVector

    @property
    def is_exactly_zero(self) -> bool:
        return all(
            v.is_zero for v in (self.re_even, self.re_odd, self.im_even, self.im_odd)
        )

    @property
    def imag_exactly_zero(self) -> bool:
        return self.im_even.is_zero and self.im_odd.is_zero

    def value(self, precision: float = 1e-14) -> complex:
        inv_sqrt2 = 1.0 / math.sqrt(2.0)
        re = evaluate_gamma_vector(self.re_even, precision)
        re += inv_sqrt2 * evaluate_gamma_vector(self.re_odd, precision)
        im = evaluate_gamma_vector(self.im_even, precision)
        im += inv_sqrt2 * evaluate_gamma_vector(self.im_odd, precision)
        return complex(re, im)


def matrix_element(
    system: CoupledSusySystem,
    expr: OperatorExpression,
    f: GaussPolyState,
    g: GaussPolyState,
) -> ExactMatrixElement:
    """Assemble <f | expr | g> exactly, word by word."""
    n = f.n
    buckets = {
        ("re", 0): GammaVector(n, {}),
        ("re", 1): GammaVector(n, {}),
        ("im", 0): GammaVector(n, {}),
        ("im", 1): GammaVector(n, {}),
    }
    for term in expr.terms:
        image = apply_word(system, term.word, g)
        s = term.sqrt2_pow
        if (f.half_power + image.half_power) % 2 != 0:
            image = image.scale_sqrt2(1)  # multiply by sqrt(2) ...
            s += 1  # ... and divide it back out here
        gv = inner_product(f, image)
        if gv.is_zero:
            continue
        gv = gv.scale(_HALF ** (s // 2))
        parity = s % 2
        if term.re:
            buckets[("re", parity)] = buckets[("re", parity)] + gv.scale(term.re)
        if term.im:
            buckets[("im", parity)] = buckets[("im", parity)] + gv.scale(term.im)
    return ExactMatrixElement(
        re_even=buckets[("re", 0)],
        re_odd=buckets[("re", 1)],
        im_even=buckets[("im", 0)],
        im_odd=buckets[("im", 1)],
    )


def _as_state(state) -> GaussPolyState:
    if isinstance(state, EigenstateRecord):
        return state.state
    return state


def _sector_residues(system: CoupledSusySystem, sector: int) -> set:
    n = system.n
    mod = 2 * n
    if sector == 1:
        return {0, (2 * n - 1) % mod}
    return {n % mod, (n - 1) % mod}


def _guard_sector(system, expr, state):
    if expr.sector is None:
        return
    allowed = _sector_residues(system, expr.sector)
    if not state.residues() <= allowed:
        raise SectorDomainError(
            f"state residues {sorted(state.residues())} lie outside the "
            f"sector-{expr.sector} classes {sorted(allowed)}"
        )


def expectation_exact(system, expr, state) -> ExactMatrixElement:
    """Unnormalised <state | expr | state> as exact data."""
    state = _as_state(state)
    _guard_sector(system, expr, state)
    return matrix_element(system, expr, state, state)


def expectation(system, expr, state, precision: float = 1e-14) -> complex:
    """Normalised expectation <expr> on the given state."""
    state = _as_state(state)
    _guard_sector(system, expr, state)
    me = matrix_element(system, expr, state, state).value(precision)
    norm_sq = evaluate_gamma_vector(inner_product(state, state), precision)
    return me / norm_sq


def variance(system, expr, state, precision: float = 1e-14) -> float:
    state = _as_state(state)
    mean = expectation(system, expr, state, precision)
    second = expectation(system, expr.compose(expr), state, precision)
    var = second.real - abs(mean) ** 2
    return max(var, 0.0)


def sigma(system, expr, state, precision: float = 1e-14) -> float:
    return math.sqrt(variance(system, expr, state, precision))


# ---------------------------------------------------------------------------
# Uncertainty products
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UncertaintyResult:
    pair: str
    sigma1: float
    sigma2: float
    product: float
    bound: float
    passed: bool
    details: dict = field(default_factory=dict)

    @property
    def equality_gap(self) -> float:
        return self.product - self.bound

    def to_json_dict(self) -> dict:
        return {
            "observable_pair": self.pair,
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "product": self.product,
            "bound": self.bound,
            "equality_gap": self.equality_gap,
            "pass": self.passed,
            "details": self.details,
        }


def uncertainty_product_LA(system, state, tolerance: float = 1e-12) -> UncertaintyResult:
    """sigma_L sigma_A against the Robertson bound (d-g)|2<a+a> - gamma|/4."""
    state = _as_state(state)
    L, A = observable_L(), observable_A()
    s_l = sigma(system, L, state)
    s_a = sigma(system, A, state)
    commutator = L.commutator_with(A)
    comm_value = expectation(system, commutator, state)
    bound = 0.5 * abs(comm_value)
    number = expectation(
        system, OperatorExpression("a+a", (WordTerm(Fraction(1), _ZERO, 0, (_AD, _A)),), 1), state
    ).real
    closed_form = float(system.spacing) / 4 * abs(2 * number - float(system.gamma))
    product = s_l * s_a
    return UncertaintyResult(
        pair="L,A",
        sigma1=s_l,
        sigma2=s_a,
        product=product,
        bound=bound,
        passed=product >= bound - tolerance,
        details={"mean_number": number, "bound_closed_form": closed_form},
    )


def uncertainty_product_tilde(system, state, tolerance: float = 1e-12) -> UncertaintyResult:
    """sigma_L~ sigma_A~ against (d-g)|2<aa+> - delta|/4 (minimised by phi~ level 0)."""
    state = _as_state(state)
    Lt, At = observable_L_tilde(), observable_A_tilde()
    s_l = sigma(system, Lt, state)
    s_a = sigma(system, At, state)
    comm_value = expectation(system, Lt.commutator_with(At), state)
    bound = 0.5 * abs(comm_value)
    number = expectation(
        system, OperatorExpression("aa+", (WordTerm(Fraction(1), _ZERO, 0, (_A, _AD)),), 2), state
    ).real
    closed_form = float(system.spacing) / 4 * abs(2 * number - float(system.delta))
    product = s_l * s_a
    return UncertaintyResult(
        pair="L~,A~",
        sigma1=s_l,
        sigma2=s_a,
        product=product,
        bound=bound,
        passed=product >= bound - tolerance,
        details={"mean_number": number, "bound_closed_form": closed_form},
    )


@dataclass(frozen=True)
class DirectSumState:
    """A normalised two-component state (sqrt(w1) psi1/|psi1|, sqrt(w2) psi2/|psi2|).

    Components are stored unnormalised; w1 and w2 are the exact squared
    weights and must sum to one.  A missing component requires weight zero.
    """

    component1: GaussPolyState | None
    component2: GaussPolyState | None
    weight1: Fraction
    weight2: Fraction

    def __post_init__(self):
        w1, w2 = Fraction(self.weight1), Fraction(self.weight2)
        if w1 < 0 or w2 < 0 or w1 + w2 != 1:
            raise ValueError("squared weights must be nonnegative and sum to 1 exactly")
        if (w1 > 0) != (self.component1 is not None):
            raise ValueError("component 1 must be present iff weight1 > 0")
        if (w2 > 0) != (self.component2 is not None):
            raise ValueError("component 2 must be present iff weight2 > 0")
        if self.component1 is not None and self.component1.is_zero:
            raise ValueError("component 1 is the zero state")
        if self.component2 is not None and self.component2.is_zero:
            raise ValueError("component 2 is the zero state")


def direct_sum(state1, weight1, state2, weight2) -> DirectSumState:
    s1 = _as_state(state1) if state1 is not None else None
    s2 = _as_state(state2) if state2 is not None else None
    return DirectSumState(s1, s2, Fraction(weight1), Fraction(weight2))


def _xp_guard(system, dstate):
    if dstate.component1 is not None:
        if not dstate.component1.residues() <= _sector_residues(system, 1):
            raise SectorDomainError("component 1 lies outside the first-sector classes")
    if dstate.component2 is not None:
        if not dstate.component2.residues() <= _sector_residues(system, 2):
            raise SectorDomainError("component 2 lies outside the second-sector classes")


def _block_expectations(system, upper, lower, dstate, precision):
    """(<Psi|Op|Psi>, <Psi|Op^2|Psi>) for Op with the given off-diagonal blocks."""
    w1, w2 = float(dstate.weight1), float(dstate.weight2)
    c1, c2 = dstate.component1, dstate.component2
    norm1_sq = evaluate_gamma_vector(inner_product(c1, c1), precision) if c1 is not None else 1.0
    norm2_sq = evaluate_gamma_vector(inner_product(c2, c2), precision) if c2 is not None else 1.0
    mean = 0.0 + 0.0j
    if c1 is not None and c2 is not None:
        cross12 = matrix_element(system, upper, c1, c2).value(precision)
        cross21 = matrix_element(system, lower, c2, c1).value(precision)
        scale = math.sqrt(w1 * w2 / (norm1_sq * norm2_sq))
        mean = scale * (cross12 + cross21)
    second = 0.0
    if c1 is not None:
        sq11 = matrix_element(system, upper.compose(lower), c1, c1).value(precision)
        second += w1 * sq11.real / norm1_sq
    if c2 is not None:
        sq22 = matrix_element(system, lower.compose(upper), c2, c2).value(precision)
        second += w2 * sq22.real / norm2_sq
    return mean, second


def uncertainty_product_XP(system, dstate: DirectSumState, tolerance: float = 1e-12,
                           precision: float = 1e-14) -> UncertaintyResult:
    """sigma_X sigma_P on a direct-sum state, with the exact Robertson bound.

    The commutator [X, P] is block diagonal and acts as -gamma on the first
    component and delta on the second, so the per-state bound is the convex
    combination (|gamma| w1 + delta w2)/2; the global minimum over states is
    min(|gamma|, delta)/2.
    """
    _xp_guard(system, dstate)
    x12, x21 = x_block("12"), x_block("21")
    p12, p21 = p_block("12"), p_block("21")
    mean_x, second_x = _block_expectations(system, x12, x21, dstate, precision)
    mean_p, second_p = _block_expectations(system, p12, p21, dstate, precision)
    var_x = max(second_x - abs(mean_x) ** 2, 0.0)
    var_p = max(second_p - abs(mean_p) ** 2, 0.0)
    s_x, s_p = math.sqrt(var_x), math.sqrt(var_p)
    product = s_x * s_p
    # Robertson bound from the block commutators, evaluated per component.
    comm11 = x12.compose(p21).minus(p12.compose(x21))
    comm22 = x21.compose(p12).minus(p21.compose(x12))
    comm_total = 0.0 + 0.0j
    if dstate.component1 is not None:
        c1 = dstate.component1
        n1 = evaluate_gamma_vector(inner_product(c1, c1), precision)
        comm_total += float(dstate.weight1) * matrix_element(system, comm11, c1, c1).value(precision) / n1
    if dstate.component2 is not None:
        c2 = dstate.component2
        n2 = evaluate_gamma_vector(inner_product(c2, c2), precision)
        comm_total += float(dstate.weight2) * matrix_element(system, comm22, c2, c2).value(precision) / n2
    bound = 0.5 * abs(comm_total)
    convex = 0.5 * float(
        abs(system.gamma) * dstate.weight1 + system.delta * dstate.weight2
    )
    global_bound = 0.5 * float(min(abs(system.gamma), system.delta))
    return UncertaintyResult(
        pair="X,P",
        sigma1=s_x,
        sigma2=s_p,
        product=product,
        bound=bound,
        passed=product >= bound - tolerance,
        details={
            "mean_x": (mean_x.real, mean_x.imag),
            "mean_p": (mean_p.real, mean_p.imag),
            "second_x": second_x,
            "second_p": second_p,
            "bound_convex_combination": convex,
            "global_bound": global_bound,
        },
    )
