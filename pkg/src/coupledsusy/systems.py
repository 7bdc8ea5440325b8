"""Coupled SUSY systems and exact verification of their algebra.

A coupled SUSY system is a quadruple {a, b, gamma, delta} with

    a+ a = b+ b + gamma,        a a+ = b b+ + delta,        gamma < delta.

The x^n family realises this with a = (x^(1-n) d/dx + x^n)/sqrt(2) and
b = (-x^(1-n) d/dx + x^n)/sqrt(2), giving gamma = -1 and delta = 2n - 1.
Differentiating x^k exp(-x^(2n)/(2n)) turns each generator into a one- or
two-term rule "x^k -> (alpha + beta k) x^(k+shift)", which is what the
verifiers below exercise monomial by monomial.

The quadratic products a+b and b+a ladder the spectrum of a+a, and after
rescaling by 1/(delta-gamma) they close into the su(1,1) commutation
relations; both facts are checked exactly (rational zero residuals) over a
finite exponent window.  Because every per-monomial coefficient is a
polynomial of degree <= 2 in the exponent, agreement on the default window
implies the identities for every integer exponent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .calculus import (
    GaussPolyState,
    Generator,
    apply_word,
    monomial_state,
)

_DEGREE_NOTE = (
    "each side acts per monomial with coefficients polynomial in the exponent "
    "of degree <= 2; exact agreement on more than three consecutive integer "
    "exponents per shift channel extends the identity to all exponents"
)


@dataclass(frozen=True)
class RuleTerm:
    """One summand of a generator rule: x^k -> (alpha + beta*k) x^(k+shift)."""

    alpha: Fraction
    beta: Fraction
    shift: int


@dataclass(frozen=True)
class CoupledSusySystem:
    """The quadruple (a, b, gamma, delta) plus the concrete generator rules.

    `rules` maps each generator to its rule terms (stored as a tuple of
    pairs so systems are hashable).  `broken` marks systems in which neither
    a nor b+ annihilates a state; no constructor for those is provided here.
    """

    n: int
    gamma: Fraction
    delta: Fraction
    rules: tuple
    broken: bool = False
    mutation: str | None = None

    def __post_init__(self):
        if self.gamma > 0 or self.delta < 0:
            raise ValueError("positivity requires gamma <= 0 <= delta")
        if not self.gamma < self.delta:
            raise ValueError("a coupled SUSY system needs gamma < delta")

    def rule_terms(self, gen: Generator) -> tuple:
        for key, terms in self.rules:
            if key is gen:
                return terms
        raise KeyError(gen)

    @property
    def spacing(self) -> Fraction:
        """Ladder spacing delta - gamma (equal to 2n for the x^n family)."""
        return self.delta - self.gamma


def _xn_rules(n: int):
    one = Fraction(1)
    return (
        (Generator.A, (RuleTerm(Fraction(0), one, -n),)),
        (
            Generator.ADAG,
            (RuleTerm(Fraction(n - 1), -one, -n), RuleTerm(Fraction(2), Fraction(0), n)),
        ),
        (
            Generator.B,
            (RuleTerm(Fraction(0), -one, -n), RuleTerm(Fraction(2), Fraction(0), n)),
        ),
        (Generator.BDAG, (RuleTerm(Fraction(1 - n), one, -n),)),
    )


#: Named single-coefficient mutations used by the verification harness.
_NAMED_MUTATIONS = {
    "b-coeff": (Generator.B, 1, "alpha", Fraction(1)),
    "a-coeff": (Generator.A, 0, "beta", Fraction(1)),
    "adag-coeff": (Generator.ADAG, 1, "alpha", Fraction(1)),
    "bdag-coeff": (Generator.BDAG, 0, "alpha", Fraction(1)),
}


def mutation_slots(system: CoupledSusySystem):
    """All (generator, term index, field) coefficient slots of the rules."""
    slots = []
    for gen, terms in system.rules:
        for idx in range(len(terms)):
            slots.append((gen, idx, "alpha"))
            slots.append((gen, idx, "beta"))
    return slots


def make_xn_system(n: int, mutate=None) -> CoupledSusySystem:
    """Build the x^n family member: gamma = -1, delta = 2n - 1.

    `mutate` optionally perturbs a single rule coefficient, either by one of
    the named tags in _NAMED_MUTATIONS or as a (generator, term_index,
    "alpha"|"beta", delta) tuple.  Mutated systems exist so the verifiers
    can prove they are not vacuous.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError("family index n must be a positive integer")
    rules = _xn_rules(n)
    note = None
    if mutate is not None:
        if isinstance(mutate, str):
            try:
                mutate = _NAMED_MUTATIONS[mutate]
            except KeyError:
                raise ValueError(f"unknown mutation tag {mutate!r}") from None
        gen, idx, which, delta = mutate
        new_rules = []
        for key, terms in rules:
            if key is gen:
                terms = list(terms)
                term = terms[idx]
                if which == "alpha":
                    terms[idx] = RuleTerm(term.alpha + Fraction(delta), term.beta, term.shift)
                elif which == "beta":
                    terms[idx] = RuleTerm(term.alpha, term.beta + Fraction(delta), term.shift)
                else:
                    raise ValueError("mutation field must be 'alpha' or 'beta'")
                terms = tuple(terms)
            new_rules.append((key, terms))
        rules = tuple(new_rules)
        note = f"{gen.value}[{idx}].{which} += {delta}"
    return CoupledSusySystem(
        n=n,
        gamma=Fraction(-1),
        delta=Fraction(2 * n - 1),
        rules=rules,
        mutation=note,
    )


def default_window(n: int) -> tuple:
    """Default exponent window for the per-monomial verifiers."""
    return (-2 * n - 10, 4 * n + 30)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking one operator identity monomial by monomial."""

    identity: str
    n: int
    k_range: tuple
    passed: bool
    first_failure: dict | None = None
    checked: int = 0
    note: str = ""

    def to_json_dict(self) -> dict:
        payload = {
            "identity": self.identity,
            "n": self.n,
            "range": list(self.k_range),
            "pass": self.passed,
            "first_failure": self.first_failure,
        }
        if self.note:
            payload["note"] = self.note
        return payload

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)


def _check_identity(
    system: CoupledSusySystem,
    name: str,
    lhs: Callable[[GaussPolyState], GaussPolyState],
    rhs: Callable[[GaussPolyState], GaussPolyState],
    exponent_range: Iterable[int],
    note: str = "",
) -> VerificationReport:
    ks = list(exponent_range)
    if not ks:
        raise ValueError("exponent range must be nonempty")
    first_failure = None
    for k in ks:
        mono = monomial_state(system.n, k)
        residual = lhs(mono) - rhs(mono)
        if not residual.is_zero:
            first_failure = {"k": k, "residual": residual.serialize()}
            break
    return VerificationReport(
        identity=name,
        n=system.n,
        k_range=(min(ks), max(ks)),
        passed=first_failure is None,
        first_failure=first_failure,
        checked=len(ks),
        note=note,
    )


def _word(system, *gens):
    def act(state):
        return apply_word(system, gens, state)

    return act


def verify_coupled_susy(system: CoupledSusySystem, exponent_range=None) -> list:
    """Check the two defining identities exactly on each monomial in the window.

    Returns one VerificationReport per identity; both must pass for the
    system to satisfy the coupled SUSY definition on the polynomial towers.
    """
    if exponent_range is None:
        exponent_range = range(*_window_bounds(system))
    A, AD, B, BD = Generator.A, Generator.ADAG, Generator.B, Generator.BDAG
    reports = [
        _check_identity(
            system,
            "a+a = b+b + gamma",
            lambda s: apply_word(system, (AD, A), s) - apply_word(system, (BD, B), s),
            lambda s: s.scale(system.gamma),
            exponent_range,
            note=_DEGREE_NOTE,
        ),
        _check_identity(
            system,
            "aa+ = bb+ + delta",
            lambda s: apply_word(system, (A, AD), s) - apply_word(system, (B, BD), s),
            lambda s: s.scale(system.delta),
            exponent_range,
            note=_DEGREE_NOTE,
        ),
    ]
    return reports


def _window_bounds(system):
    lo, hi = default_window(system.n)
    return lo, hi + 1


def verify_su11(system: CoupledSusySystem, exponent_range=None) -> list:
    """Check the su(1,1) ladder commutators exactly, sector by sector.

    The raw-word identities are verified together with their rescaled forms
    [K0, K+-] = +-K+- and [K+, K-] = -2 K0, where K+- and K0 carry the
    1/(delta-gamma) normalisation.  The second-sector commutator
    [ba+, ab+] is compared against 2(gamma-delta)(aa+ - delta/2), which it
    must equal given bb+ = aa+ - delta; the check below computes it rather
    than assuming it.
    """
    if exponent_range is None:
        exponent_range = range(*_window_bounds(system))
    ks = list(exponent_range)
    A, AD, B, BD = Generator.A, Generator.ADAG, Generator.B, Generator.BDAG
    dg = system.spacing

    def commutator(w1, w2):
        def act(state):
            return apply_word(system, w1 + w2, state) - apply_word(system, w2 + w1, state)

        return act

    reports = []
    # First sector: ladder action of a+b and b+a on a+a.
    reports.append(
        _check_identity(
            system,
            "[a+a, a+b] = (delta-gamma) a+b",
            commutator((AD, A), (AD, B)),
            lambda s: apply_word(system, (AD, B), s).scale(dg),
            ks,
            note=_DEGREE_NOTE,
        )
    )
    reports.append(
        _check_identity(
            system,
            "[a+a, b+a] = -(delta-gamma) b+a",
            commutator((AD, A), (BD, A)),
            lambda s: apply_word(system, (BD, A), s).scale(-dg),
            ks,
        )
    )
    reports.append(
        _check_identity(
            system,
            "[a+b, b+a] = 2(gamma-delta)(a+a - gamma/2)",
            commutator((AD, B), (BD, A)),
            lambda s: (
                apply_word(system, (AD, A), s) - s.scale(system.gamma / 2)
            ).scale(-2 * dg),
            ks,
        )
    )
    # Second sector: ba+ and ab+ ladder aa+.
    reports.append(
        _check_identity(
            system,
            "[aa+, ba+] = (delta-gamma) ba+",
            commutator((A, AD), (B, AD)),
            lambda s: apply_word(system, (B, AD), s).scale(dg),
            ks,
        )
    )
    reports.append(
        _check_identity(
            system,
            "[aa+, ab+] = -(delta-gamma) ab+",
            commutator((A, AD), (A, BD)),
            lambda s: apply_word(system, (A, BD), s).scale(-dg),
            ks,
        )
    )
    reports.append(
        _check_identity(
            system,
            "[ba+, ab+] = 2(gamma-delta)(aa+ - delta/2)",
            commutator((B, AD), (A, BD)),
            lambda s: (
                apply_word(system, (A, AD), s) - s.scale(system.delta / 2)
            ).scale(-2 * dg),
            ks,
        )
    )
    # Normalised forms: K0, K+, K- with the 1/(delta-gamma) prefactors.
    k0 = _k_operator(system, "k0")
    kplus = _k_operator(system, "k+")
    kminus = _k_operator(system, "k-")

    def lin_comm(f, g):
        def act(state):
            return f(g(state)) - g(f(state))

        return act

    reports.append(
        _check_identity(
            system,
            "[K0, K+] = K+",
            lin_comm(k0, kplus),
            kplus,
            ks,
        )
    )
    reports.append(
        _check_identity(
            system,
            "[K0, K-] = -K-",
            lin_comm(k0, kminus),
            lambda s: kminus(s).scale(-1),
            ks,
        )
    )
    reports.append(
        _check_identity(
            system,
            "[K+, K-] = -2 K0",
            lin_comm(kplus, kminus),
            lambda s: k0(s).scale(-2),
            ks,
        )
    )
    return reports


@dataclass(frozen=True)
class KOperators:
    """The su(1,1) triple: K+ = a+b/(d-g), K- = b+a/(d-g), K0 = (a+a - g/2)/(d-g)."""

    system: CoupledSusySystem

    @property
    def prefactor(self) -> Fraction:
        return 1 / self.system.spacing

    def apply(self, which: str, state: GaussPolyState) -> GaussPolyState:
        return _k_operator(self.system, which)(state)


def _k_operator(system, which):
    A, AD, B, BD = Generator.A, Generator.ADAG, Generator.B, Generator.BDAG
    pref = 1 / system.spacing
    if which == "k+":
        return lambda s: apply_word(system, (AD, B), s).scale(pref)
    if which == "k-":
        return lambda s: apply_word(system, (BD, A), s).scale(pref)
    if which == "k0":
        return lambda s: (
            apply_word(system, (AD, A), s) - s.scale(system.gamma / 2)
        ).scale(pref)
    if which == "k0~":
        return lambda s: (
            apply_word(system, (A, AD), s) - s.scale(system.delta / 2)
        ).scale(pref)
    if which == "k+~":
        return lambda s: apply_word(system, (B, AD), s).scale(pref)
    if which == "k-~":
        return lambda s: apply_word(system, (A, BD), s).scale(pref)
    raise ValueError(f"unknown K operator {which!r}")


def all_reports_pass(reports: Iterable[VerificationReport]) -> bool:
    return all(r.passed for r in reports)
