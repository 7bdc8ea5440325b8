"""Displacement coherent states over the eigenstate towers.

Each tower carries a discrete-series su(1,1) representation.  Writing k for
the lowest K0 eigenvalue of the representation (the Bargmann index), the
displacement operator exp(z K+ - conj(z) K-) applied to the cyclic vector
produces, for |z| < 1,

    |z; k> = (1 - |z|^2)^k  sum_m  sqrt(Gamma(m+2k) / (m! Gamma(2k)))  z^m  e_m,

where e_m is the normalised tower state m steps above the cyclic vector.
The four towers give four families with indices

    PSI:        k = -gamma / (2(delta-gamma))
    PHI:        k =  delta / (2(delta-gamma)) + 1/2
    PSI_TILDE:  k = -gamma / (2(delta-gamma)) + 1/2
    PHI_TILDE:  k =  delta / (2(delta-gamma))

The PSI_TILDE tower starts at level 1 (a annihilates the PSI ground state),
so its series coefficient index is the level minus one; with that shift the
state is exactly normalised, like the other three.

Coefficients are generated by the stable ratio recurrence

    c_{m+1} / c_m = z sqrt((m + 2k) / (m + 1)),

so no Gamma evaluations are needed for construction; truncation uses a
geometric tail majorant with ratio |z|^2 sup_{m>M} (m+2k)/(m+1).

Applying a to a PSI coherent state, or b+ to a PHI_TILDE one, transfers it
coefficient-by-coefficient onto the partner family: half of a quadratic
lowering word intertwines the families with the exact scalar

    sqrt(-gamma) z / sqrt(1-|z|^2)     (a on PSI)
    sqrt(delta)  z / sqrt(1-|z|^2)     (b+ on PHI_TILDE),

as the ladder norm relations force (substituting the coefficient ratios
shows both scalars share the 1/sqrt(1-|z|^2) factor).  The full quadratic
lowering word b+a does not fix any of these states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .systems import CoupledSusySystem
from .towers import SectorLabel, half_lowering_factor_squared


@dataclass(frozen=True)
class CoherentState:
    """Truncated coefficient expansion of a displacement coherent state.

    coefficients[i] multiplies the normalised tower state at level
    m_start + i; the dropped tail has squared l2 mass below tail_bound.
    """

    sector: SectorLabel
    k: Fraction
    z: complex
    m_start: int
    coefficients: tuple
    tail_bound: float

    @property
    def truncation_level(self) -> int:
        return self.m_start + len(self.coefficients) - 1

    def norm_sq(self) -> float:
        return sum(abs(c) ** 2 for c in self.coefficients)

    def coefficient_at_level(self, m: int) -> complex:
        i = m - self.m_start
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return 0.0

    def to_json_dict(self) -> dict:
        return {
            "sector": self.sector.value,
            "k": f"{self.k.numerator}/{self.k.denominator}",
            "z": [self.z.real, self.z.imag],
            "m_start": self.m_start,
            "M": self.truncation_level,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
            "tail_bound": self.tail_bound,
        }


@dataclass(frozen=True)
class HalfLoweringCheck:
    """Result of the coefficientwise intertwining check."""

    sector: SectorLabel
    operator: str
    target_sector: SectorLabel
    target_k: Fraction
    scalar: complex
    best_fit_scalar: complex
    residual: float
    compared_levels: int
    tail_bound_source: float
    tail_bound_target: float

    @property
    def total_mismatch_bound(self) -> float:
        """Residual plus the truncated-tail mass both series may hide."""
        tails = self.tail_bound_source + abs(self.scalar) ** 2 * self.tail_bound_target
        return self.residual + math.sqrt(max(tails, 0.0))


def bargmann_index(system: CoupledSusySystem, sector: SectorLabel) -> Fraction:
    dg = system.spacing
    if sector is SectorLabel.PSI:
        return -system.gamma / (2 * dg)
    if sector is SectorLabel.PHI:
        return system.delta / (2 * dg) + Fraction(1, 2)
    if sector is SectorLabel.PSI_TILDE:
        return -system.gamma / (2 * dg) + Fraction(1, 2)
    return system.delta / (2 * dg)


def bargmann_indices(system: CoupledSusySystem) -> dict:
    return {sector: bargmann_index(system, sector) for sector in SectorLabel}


def coherent_state(
    system: CoupledSusySystem,
    sector: SectorLabel,
    z: complex,
    tol: float = 1e-12,
    max_terms: int = 100000,
) -> CoherentState:
    """Construct the displacement coherent state truncated to tail mass < tol."""
    if system.broken:
        raise ValueError("coherent towers require an unbroken system")
    z = complex(z)
    if abs(z) >= 1:
        raise ValueError("|z| must be < 1 (disk of convergence)")
    if not tol > 0:
        raise ValueError("tol must be positive")
    k = bargmann_index(system, sector)
    two_k = float(2 * k)
    m_start = 1 if sector is SectorLabel.PSI_TILDE else 0
    zsq = abs(z) ** 2
    prefactor = (1.0 - zsq) ** float(k)
    coeffs = [complex(prefactor)]
    if z == 0:
        return CoherentState(sector, k, z, m_start, (complex(prefactor),), 0.0)

    def tail_bound_after(index_m):
        sup = 1.0 if two_k <= 1.0 else (index_m + two_k) / (index_m + 1.0)
        ratio = zsq * sup
        if ratio >= 1.0:
            return math.inf
        last = abs(coeffs[-1]) ** 2
        return last * ratio / (1.0 - ratio)

    m = 0
    while tail_bound_after(m) >= tol:
        coeffs.append(coeffs[-1] * z * math.sqrt((m + two_k) / (m + 1.0)))
        m += 1
        if m > max_terms:
            raise RuntimeError("truncation did not converge; |z| too close to 1")
    return CoherentState(
        sector=sector,
        k=k,
        z=z,
        m_start=m_start,
        coefficients=tuple(coeffs),
        tail_bound=tail_bound_after(m),
    )


def coefficient_from_gamma(k: Fraction, z: complex, series_index: int, dps: int = 40) -> complex:
    """Direct Gamma-formula coefficient, for cross-checking the recurrence."""
    with mp.workdps(dps):
        two_k = mp.mpf(2 * k.numerator) / k.denominator
        amp = mp.sqrt(
            mp.gamma(series_index + two_k)
            / (mp.factorial(series_index) * mp.gamma(two_k))
        )
        pref = mp.power(1 - abs(z) ** 2, mp.mpf(k.numerator) / k.denominator)
        value = pref * amp * mp.mpc(z) ** series_index
        return complex(value)


_HALF_LOWERING = {
    SectorLabel.PSI: ("a", SectorLabel.PSI_TILDE),
    SectorLabel.PHI_TILDE: ("b+", SectorLabel.PHI),
}


def half_lowering_scalar(system: CoupledSusySystem, sector: SectorLabel, z: complex) -> complex:
    """The exact intertwining scalar for a (on PSI) or b+ (on PHI_TILDE)."""
    if sector is SectorLabel.PSI:
        root = math.sqrt(float(-system.gamma))
    elif sector is SectorLabel.PHI_TILDE:
        root = math.sqrt(float(system.delta))
    else:
        raise ValueError("half lowering transfers PSI or PHI_TILDE states")
    return root * complex(z) / math.sqrt(1.0 - abs(z) ** 2)


def verify_half_lowering(
    system: CoupledSusySystem,
    sector: SectorLabel,
    z: complex,
    tol: float = 1e-12,
) -> HalfLoweringCheck:
    """Apply half of the lowering word coefficientwise and compare families.

    The image of each tower state is sqrt(lambda^2) times the partner tower
    state (the ladder norm relations); collecting coefficients must land on
    `scalar` times the partner coherent state.  The residual is the l2
    mismatch over the levels both truncations resolve; the dropped tails
    are reported separately and are below tol by construction.
    """
    if sector not in _HALF_LOWERING:
        raise ValueError("half lowering is verified from PSI (a) or PHI_TILDE (b+)")
    op_name, target_sector = _HALF_LOWERING[sector]
    source = coherent_state(system, sector, z, tol)
    target = coherent_state(system, target_sector, z, tol)
    scalar = half_lowering_scalar(system, sector, z)

    image = {}
    for i, c in enumerate(source.coefficients):
        m = source.m_start + i
        lamsq = half_lowering_factor_squared(system, sector, m)
        if lamsq == 0:
            continue
        target_level = m if sector is SectorLabel.PSI else m - 1
        image[target_level] = c * math.sqrt(float(lamsq))

    shared = [m for m in sorted(image) if source_covers(target, m)]
    residual_sq = 0.0
    dot = 0.0 + 0.0j
    tt = 0.0
    for m in shared:
        t = target.coefficient_at_level(m)
        residual_sq += abs(image[m] - scalar * t) ** 2
        dot += image[m] * t.conjugate()
        tt += abs(t) ** 2
    best_fit = dot / tt if tt > 0 else complex(0)
    return HalfLoweringCheck(
        sector=sector,
        operator=op_name,
        target_sector=target_sector,
        target_k=target.k,
        scalar=scalar,
        best_fit_scalar=best_fit,
        residual=math.sqrt(residual_sq),
        compared_levels=len(shared),
        tail_bound_source=source.tail_bound,
        tail_bound_target=target.tail_bound,
    )


def source_covers(state: CoherentState, level: int) -> bool:
    return state.m_start <= level <= state.truncation_level


def full_lowering_misfit(
    system: CoupledSusySystem,
    z: complex,
    tol: float = 1e-12,
):
    """Best-scalar relative residual of b+a applied to a PSI coherent state.

    The quadratic lowering word maps the level-m state to
    sqrt(m(d-g)) sqrt(m(d-g) - delta) times the level m-1 state.  Coherent
    states here are not eigenstates of that word; the returned residual is
    || image - s* state || / || image || for the least-squares scalar s*.
    """
    source = coherent_state(system, SectorLabel.PSI, z, tol)
    image = {}
    for i, c in enumerate(source.coefficients):
        m = source.m_start + i
        if m == 0:
            continue
        lam1 = half_lowering_factor_squared(system, SectorLabel.PSI, m)
        lam2 = half_lowering_factor_squared(system, SectorLabel.PSI_TILDE, m)
        image[m - 1] = c * math.sqrt(float(lam1 * lam2))
    dot = 0.0 + 0.0j
    ss = 0.0
    norm_image_sq = sum(abs(v) ** 2 for v in image.values())
    if norm_image_sq == 0:
        return complex(0), 0.0
    for m, v in image.items():
        s = source.coefficient_at_level(m)
        dot += v * s.conjugate()
        ss += abs(s) ** 2
    best = dot / ss if ss > 0 else complex(0)
    residual_sq = sum(
        abs(v - best * source.coefficient_at_level(m)) ** 2 for m, v in image.items()
    )
    return best, math.sqrt(residual_sq / norm_image_sq)
