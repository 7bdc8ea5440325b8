"""Eigenstate towers of the coupled SUSY Hamiltonians.

Four families of eigenfunctions are generated from two ground states:

    PSI        ker a,            a+a eigenvalue m(delta-gamma)
    PHI        ker b+a \\ ker a,  a+a eigenvalue m(delta-gamma) + delta
    PSI_TILDE  a . PSI (m >= 1), aa+ eigenvalue m(delta-gamma)
    PHI_TILDE  a . PHI,          aa+ eigenvalue m(delta-gamma) + delta

The quadratic word a+b raises m by one inside each untilded family, so a
level-m state is (a+b)^m applied to the ground state.  States are kept
unnormalised with their exact squared norm attached; normalisation only
happens at numeric export, because the norms are irrational Gamma values.

For the x^n family the kernels of a and b+ on smooth whole-line states are
one dimensional (exp(-x^(2n)/(2n)) and x^(n-1) exp(-x^(2n)/(2n))), so the
tower index sets are singletons.  Exponents of a level-m state stay in a
single residue class mod 2n: 0 for PSI, 2n-1 for PHI, n for PSI_TILDE and
n-1 for PHI_TILDE.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .calculus import (
    FamilyMismatchError,
    GammaVector,
    GaussPolyState,
    Generator,
    LOWERING_WORD,
    RAISING_WORD,
    apply_generator,
    apply_word,
    evaluate_gamma_vector,
    inner_product,
    monomial_state,
)
from .systems import CoupledSusySystem, VerificationReport


class SectorLabel(Enum):
    PSI = "psi"
    PHI = "phi"
    PSI_TILDE = "psi~"
    PHI_TILDE = "phi~"

    @property
    def is_tilde(self) -> bool:
        return self in (SectorLabel.PSI_TILDE, SectorLabel.PHI_TILDE)

    @property
    def base(self) -> "SectorLabel":
        if self is SectorLabel.PSI_TILDE:
            return SectorLabel.PSI
        if self is SectorLabel.PHI_TILDE:
            return SectorLabel.PHI
        return self

    def residue(self, n: int) -> int:
        mod = 2 * n
        return {
            SectorLabel.PSI: 0,
            SectorLabel.PHI: (2 * n - 1) % mod,
            SectorLabel.PSI_TILDE: n % mod,
            SectorLabel.PHI_TILDE: (n - 1) % mod,
        }[self]


@dataclass(frozen=True)
class EigenstateRecord:
    """An unnormalised exact eigenstate with its norm and eigenvalue.

    Untilded records are eigenstates of a+a, tilde records of aa+; both
    carry the same eigenvalue ladder m(delta-gamma) / m(delta-gamma)+delta.
    """

    sector: SectorLabel
    m: int
    state: GaussPolyState
    norm_sq: GammaVector
    eigenvalue: Fraction

    def to_json_dict(self) -> dict:
        return {
            "sector": self.sector.value,
            "m": self.m,
            "n": self.state.n,
            "eigenvalue": f"{self.eigenvalue.numerator}/{self.eigenvalue.denominator}",
            "state": self.state.serialize(),
            "norm_sq": self.norm_sq.serialize(),
        }


def tower_eigenvalue(system: CoupledSusySystem, sector: SectorLabel, m: int) -> Fraction:
    base = m * system.spacing
    if sector.base is SectorLabel.PHI:
        base += system.delta
    return Fraction(base)


@functools.lru_cache(maxsize=4096)
def _tower_state(system: CoupledSusySystem, sector: SectorLabel, m: int) -> GaussPolyState:
    n = system.n
    if sector.is_tilde:
        return apply_generator(system, Generator.A, _tower_state(system, sector.base, m))
    if m == 0:
        seed = 0 if sector is SectorLabel.PSI else 2 * n - 1
        return monomial_state(n, seed)
    return apply_word(system, RAISING_WORD, _tower_state(system, sector, m - 1))


def eigenstate(system: CoupledSusySystem, sector: SectorLabel, m: int) -> EigenstateRecord:
    """Level-m eigenstate record of the given tower.

    PSI_TILDE requires m >= 1 because a annihilates the PSI ground state.
    The eigenvalue equation is re-verified exactly on construction.
    """
    if m < 0:
        raise ValueError("tower level m must be nonnegative")
    if sector is SectorLabel.PSI_TILDE and m == 0:
        raise ValueError("the tilde image of the PSI ground state vanishes (m >= 1)")
    state = _tower_state(system, sector, m)
    value = tower_eigenvalue(system, sector, m)
    hamiltonian = (Generator.A, Generator.ADAG) if sector.is_tilde else (Generator.ADAG, Generator.A)
    if apply_word(system, hamiltonian, state) != state.scale(value):
        raise RuntimeError(
            f"eigenvalue equation failed for {sector} m={m}; system rules are inconsistent"
        )
    return EigenstateRecord(
        sector=sector,
        m=m,
        state=state,
        norm_sq=inner_product(state, state),
        eigenvalue=value,
    )


def ground_states(system: CoupledSusySystem):
    """The two unnormalised ground states (PSI level 0, PHI level 0).

    Construction checks that a annihilates the first, and that the lowering
    word b+a (but not a itself) annihilates the second.
    """
    psi0 = eigenstate(system, SectorLabel.PSI, 0)
    phi0 = eigenstate(system, SectorLabel.PHI, 0)
    if not apply_generator(system, Generator.A, psi0.state).is_zero:
        raise RuntimeError("PSI ground state is not annihilated by a")
    if not apply_word(system, LOWERING_WORD, phi0.state).is_zero:
        raise RuntimeError("PHI ground state is not annihilated by b+a")
    if apply_generator(system, Generator.A, phi0.state).is_zero:
        raise RuntimeError("PHI ground state must not lie in ker a")
    return psi0, phi0


def merged_spectrum(system: CoupledSusySystem, count: int):
    """Lowest `count` eigenvalues of a+a from both towers, ascending."""
    values = []
    m = 0
    while len(values) < 2 * count:
        values.append(tower_eigenvalue(system, SectorLabel.PSI, m))
        values.append(tower_eigenvalue(system, SectorLabel.PHI, m))
        m += 1
    return sorted(values)[:count]


# ---------------------------------------------------------------------------
# Closed-form ladder via the conjugated second-order operator
# ---------------------------------------------------------------------------


def _differentiate_double_weight(n: int, terms: dict) -> dict:
    """d/dx of sum c_k x^k exp(-x^(2n)/n), returned as a term map."""
    out: dict = {}
    for k, c in terms.items():
        if k != 0:
            out[k - 1] = out.get(k - 1, Fraction(0)) + c * k
        kk = k + 2 * n - 1
        out[kk] = out.get(kk, Fraction(0)) - 2 * c
    return {k: c for k, c in out.items() if c != 0}


def closed_form_eigenstate(n: int, index: int) -> GaussPolyState:
    """Eigenfunction number `index` from the conjugated derivative formula.

    Even indices 2m come from applying (d/dx x^(2-2n) d/dx) m times to
    exp(-x^(2n)/n); odd indices 2m+1 use the seed x^(2n-1) exp(-x^(2n)/n).
    Conjugating by exp(x^(2n)/(2n)) leaves a polynomial multiple of the
    usual weight exp(-x^(2n)/(2n)), which is what gets returned.  For n=1
    this reproduces the Hermite functions up to normalisation.
    """
    if index < 0:
        raise ValueError("index must be nonnegative")
    m, odd = divmod(index, 2)
    terms = {2 * n - 1: Fraction(1)} if odd else {0: Fraction(1)}
    for _ in range(m):
        step = _differentiate_double_weight(n, terms)
        step = {k + 2 - 2 * n: c for k, c in step.items()}
        terms = _differentiate_double_weight(n, step)
    return GaussPolyState(n, terms)


# ---------------------------------------------------------------------------
# Ladder coefficient checks
# ---------------------------------------------------------------------------


def half_lowering_factor_squared(
    system: CoupledSusySystem, sector: SectorLabel, m: int
) -> Fraction:
    """Exact lambda^2 in a psi_m = lambda psi~_m (and companions).

    Applying a to a normalised level-m untilded state, or b+ to a tilde one,
    lands on the normalised partner state times sqrt of:

        PSI       -> m (delta-gamma)
        PHI       -> m (delta-gamma) + delta
        PSI_TILDE -> m (delta-gamma) - delta   (b+ lowers to PSI level m-1)
        PHI_TILDE -> m (delta-gamma)           (b+ lowers to PHI level m-1)
    """
    dg = system.spacing
    if sector is SectorLabel.PSI:
        return Fraction(m) * dg
    if sector is SectorLabel.PHI:
        return Fraction(m) * dg + system.delta
    if sector is SectorLabel.PSI_TILDE:
        return Fraction(m) * dg - system.delta
    return Fraction(m) * dg


def verify_lemma_half_lowering(system: CoupledSusySystem, m_max: int) -> VerificationReport:
    """Exact check of the four half-lowering norm relations up to level m_max.

    Each relation is verified without division: for unnormalised states,
    <T s, T s> must equal lambda^2 <s, s> as identical GammaVectors.
    """
    if m_max < 1:
        raise ValueError("m_max must be at least 1")
    failures = []
    checked = 0
    for m in range(0, m_max + 1):
        cases = []
        if m >= 1:
            cases.append((SectorLabel.PSI, Generator.A, m))
            cases.append((SectorLabel.PSI_TILDE, Generator.BDAG, m))
            cases.append((SectorLabel.PHI_TILDE, Generator.BDAG, m))
        cases.append((SectorLabel.PHI, Generator.A, m))
        for sector, op, level in cases:
            source = (
                _tower_state(system, sector, level)
                if not sector.is_tilde
                else _tower_state(system, sector, level)
            )
            image = apply_generator(system, op, source)
            lamsq = half_lowering_factor_squared(system, sector, level)
            lhs = inner_product(image, image)
            rhs = inner_product(source, source).scale(lamsq)
            checked += 1
            if lhs != rhs:
                failures.append({"sector": sector.value, "m": level})
    return VerificationReport(
        identity="half-lowering norm relations",
        n=system.n,
        k_range=(0, m_max),
        passed=not failures,
        first_failure=failures[0] if failures else None,
        checked=checked,
        note=(
            "lambda^2 values: m(d-g) for PSI and PHI_TILDE, m(d-g)+delta for "
            "PHI, m(d-g)-delta for PSI_TILDE"
        ),
    )


def gram_matrix(records) -> list:
    """Exact pairwise inner products of the given records."""
    records = list(records)
    if len({r.state.n for r in records}) > 1:
        raise FamilyMismatchError("records belong to different families")
    return [[inner_product(a.state, b.state) for b in records] for a in records]


def gram_matrix_numeric(records, precision: float = 1e-14):
    import numpy as np

    exact = gram_matrix(records)
    return np.array([[evaluate_gamma_vector(v, precision) for v in row] for row in exact])


def normalized_samples(record: EigenstateRecord, xs, precision: float = 1e-14):
    """Values of the L2-normalised eigenfunction on the grid xs."""
    import numpy as np

    norm = evaluate_gamma_vector(record.norm_sq, precision)
    return record.state.evaluate(np.asarray(xs, dtype=float)) / norm ** 0.5
