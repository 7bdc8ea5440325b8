"""Independent numeric confirmation of the ladder spectrum.

Two routes, deliberately different from the exact tower construction:

* A Galerkin (Rayleigh-Ritz) generalized eigenproblem over the monomial
  basis x^(r + 2nt) exp(-x^(2n)/(2n)) of one residue class, with stiffness
  entries <a b_i, a b_j> and Gram entries <b_i, b_j> assembled exactly as
  GammaVectors and only then evaluated at extended precision.  The basis
  contains the true eigenfunctions, so the computed eigenvalues sit on the
  theory ladder up to conditioning of the monomial Gram matrix, which grows
  quickly with the basis size; exact entries plus extended precision keep
  that under control for moderate sizes.

* A conservative second-order finite-difference discretisation of
  H = (-(x^(2-2n) u')' + (x^(2n) - 1) u)/2 on [-L, L] with Dirichlet ends.
  Interior unknowns sit at x_i = -L + i h; the singular coefficient
  w = x^(2-2n) is sampled only at the inter-node midpoints -L + (i+1/2) h,
  which for even N never touch x = 0 (odd N would, and is rejected).  A
  refinement sweep N/2 -> N with Richardson extrapolation is performed and
  reported alongside the raw values; the raw scheme is cleanly second
  order for n = 1, while the x = 0 singularity limits the observed order
  for n >= 2, hence the looser documented tolerances.  The offset grid
  implicitly selects one self-adjoint extension at x = 0 for n >= 2; this
  is flagged in the report, not resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp
from scipy.linalg import eigh_tridiagonal

from .calculus import (
    Generator,
    apply_generator,
    evaluate_gamma_vector_mp,
    inner_product,
    monomial_state,
)
from .systems import CoupledSusySystem
from .towers import SectorLabel, tower_eigenvalue


class PrecisionLossError(RuntimeError):
    """The Gram matrix stopped being positive definite at the working precision."""


#: Documented tolerances on the lowest eigenvalues (relative, with the zero
#: eigenvalue measured absolutely), per family index, for the refined
#: finite-difference route at the reference grids (L=12, N=2000 for n=1;
#: L=6, N=4000 for n=2; L=6, N=1000 for n=3).  Values come from refinement
#: sweeps, not from an assumed convergence order: for n >= 3 the midpoint
#: samples of x^(2-2n) grow so fast that finer grids amplify roundoff, so
#: the useful grid window is bounded on both sides.
FD_DOCUMENTED_TOLERANCE = {1: 1e-5, 2: 0.05, 3: 0.10}


@dataclass(frozen=True)
class GalerkinProblem:
    """Exact weak-form matrices of a+a over one residue-class monomial basis."""

    n: int
    residue: int
    exponents: tuple
    h_matrix: tuple
    s_matrix: tuple

    @property
    def size(self) -> int:
        return len(self.exponents)


@dataclass(frozen=True)
class SpectrumReport:
    """Computed vs theoretical eigenvalues with per-eigenvalue errors.

    `rel_errors` uses |computed - theory| / max(1, |theory|) so the zero
    ground eigenvalue is measured absolutely.
    """

    method: str
    n: int
    computed: tuple
    theory: tuple
    rel_errors: tuple
    precision_bits: int
    details: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "n": self.n,
            "computed": list(self.computed),
            "theory": [f"{t.numerator}/{t.denominator}" for t in self.theory],
            "rel_errors": list(self.rel_errors),
            "precision_bits": self.precision_bits,
            "details": self.details,
        }

    def rows(self):
        for i, (c, t, e) in enumerate(zip(self.computed, self.theory, self.rel_errors)):
            yield i, c, float(t), e


def _relative_errors(computed, theory):
    return tuple(abs(c - float(t)) / max(1.0, abs(float(t))) for c, t in zip(computed, theory))


def build_galerkin(system: CoupledSusySystem, residue: int, size: int) -> GalerkinProblem:
    """Assemble exact H and S for the residue-class basis of the given size."""
    n = system.n
    if size < 1:
        raise ValueError("basis size must be at least 1")
    if residue not in (0, 2 * n - 1):
        raise ValueError(f"residue must be 0 or {2 * n - 1} for the a+a sectors")
    exponents = tuple(residue + 2 * n * t for t in range(size))
    basis = [monomial_state(n, k) for k in exponents]
    lowered = [apply_generator(system, Generator.A, b) for b in basis]
    h_rows = []
    s_rows = []
    for i in range(size):
        h_rows.append(tuple(inner_product(lowered[i], lowered[j]) for j in range(size)))
        s_rows.append(tuple(inner_product(basis[i], basis[j]) for j in range(size)))
    return GalerkinProblem(
        n=n,
        residue=residue,
        exponents=exponents,
        h_matrix=tuple(h_rows),
        s_matrix=tuple(s_rows),
    )


def _galerkin_theory(system, residue, size):
    sector = SectorLabel.PSI if residue == 0 else SectorLabel.PHI
    return tuple(tower_eigenvalue(system, sector, m) for m in range(size))


def solve_generalized(
    problem: GalerkinProblem,
    system: CoupledSusySystem,
    precision_bits: int = 128,
    count: int | None = None,
) -> SpectrumReport:
    """Solve H c = lambda S c by congruence at the requested binary precision.

    S is Cholesky-factored after numeric evaluation; failure of the
    factorisation means the working precision cannot resolve positive
    definiteness, in which case the caller should raise the precision or
    lower the basis size.
    """
    size = problem.size
    count = size if count is None else min(count, size)
    guard = 24
    with mp.workprec(precision_bits + guard):
        H = mp.matrix(size)
        S = mp.matrix(size)
        for i in range(size):
            for j in range(size):
                H[i, j] = evaluate_gamma_vector_mp(
                    problem.h_matrix[i][j], precision_bits + guard
                )[0]
                S[i, j] = evaluate_gamma_vector_mp(
                    problem.s_matrix[i][j], precision_bits + guard
                )[0]
        try:
            L = mpmath.cholesky(S)
            Linv = mp.inverse(L)
        except (ValueError, ZeroDivisionError) as exc:
            raise PrecisionLossError(
                "Gram matrix is not positive definite at the working precision; "
                "raise precision_bits or lower the basis size"
            ) from exc
        M = Linv * H * Linv.T
        M = (M + M.T) / 2
        eigenvalues, _ = mp.eigsy(M)
        computed_mp = sorted(eigenvalues[i] for i in range(size))[:count]
        s_eigs, _ = mp.eigsy(S)
        s_sorted = sorted(s_eigs[i] for i in range(size))
        condition = float(s_sorted[-1] / s_sorted[0]) if s_sorted[0] > 0 else float("inf")
        computed = tuple(float(v) for v in computed_mp)
    theory = _galerkin_theory(system, problem.residue, size)[:count]
    return SpectrumReport(
        method="galerkin",
        n=problem.n,
        computed=computed,
        theory=theory,
        rel_errors=_relative_errors(computed, theory),
        precision_bits=precision_bits,
        details={
            "residue": problem.residue,
            "basis_size": size,
            "gram_condition": condition,
            "working_precision_bits": precision_bits + guard,
        },
    )


def galerkin_spectrum(
    system: CoupledSusySystem,
    residue: int,
    size: int,
    precision_bits: int = 128,
    count: int | None = None,
) -> SpectrumReport:
    return solve_generalized(build_galerkin(system, residue, size), system, precision_bits, count)


# ---------------------------------------------------------------------------
# Finite differences
# ---------------------------------------------------------------------------


def _assemble_fd(n: int, half_width: float, grid_count: int, potential_exponent=None):
    """Tridiagonal (diag, offdiag, nodes) for the conservative scheme."""
    if grid_count % 2 != 0:
        raise ValueError(
            "grid count must be even: odd counts place a coefficient sample "
            "at the singular point x = 0"
        )
    if grid_count < 8:
        raise ValueError("grid too coarse")
    h = 2.0 * half_width / grid_count
    nodes = -half_width + h * np.arange(1, grid_count)
    midpoints = -half_width + h * (np.arange(grid_count) + 0.5)
    if np.any(midpoints == 0.0):
        raise ValueError("coefficient sample collided with x = 0")
    w = midpoints ** (2 - 2 * n) if n != 1 else np.ones_like(midpoints)
    p = 2 * n if potential_exponent is None else potential_exponent
    diag = 0.5 * ((w[:-1] + w[1:]) / h ** 2 + (nodes ** p - 1.0))
    off = -0.5 * w[1:-1] / h ** 2
    return diag, off, nodes


def fd_spectrum(
    n: int,
    half_width: float,
    grid_count: int,
    count: int = 6,
    refine: bool = True,
    potential_exponent=None,
) -> SpectrumReport:
    """Lowest eigenvalues of the finite-difference Hamiltonian on [-L, L].

    With `refine` (default) the problem is also solved on the half grid and
    the reported values are the Richardson extrapolates (4 f_N - f_{N/2})/3,
    which cancel the leading second-order error; the raw values of both
    grids stay available in the details.  Refinement needs N divisible by 4
    so that the half grid is still even.
    """
    sysn_theory = merged_spectrum_from_index(n, count)
    diag, off, _ = _assemble_fd(n, half_width, grid_count, potential_exponent)
    raw = eigh_tridiagonal(diag, off, select="i", select_range=(0, count - 1))[0]
    details = {
        "half_width": half_width,
        "grid_count": grid_count,
        "raw": [float(v) for v in raw],
        "documented_tolerance": FD_DOCUMENTED_TOLERANCE.get(n, 0.10),
        "boundary_note": (
            "offset grid implicitly selects one self-adjoint extension at x=0 "
            "for n >= 2"
        ),
    }
    if refine and grid_count % 4 == 0:
        diag2, off2, _ = _assemble_fd(n, half_width, grid_count // 2, potential_exponent)
        coarse = eigh_tridiagonal(diag2, off2, select="i", select_range=(0, count - 1))[0]
        computed = (4.0 * raw - coarse) / 3.0
        details["coarse"] = [float(v) for v in coarse]
        details["refined"] = True
    else:
        computed = raw
        details["refined"] = False
    computed = tuple(float(v) for v in computed)
    return SpectrumReport(
        method="fd",
        n=n,
        computed=computed,
        theory=sysn_theory,
        rel_errors=_relative_errors(computed, sysn_theory),
        precision_bits=53,
        details=details,
    )


def merged_spectrum_from_index(n: int, count: int):
    """Theory eigenvalues {2kn} union {2kn + 2n - 1}, ascending, as Fractions."""
    values = []
    k = 0
    while len(values) < 2 * count:
        values.append(Fraction(2 * k * n))
        values.append(Fraction(2 * k * n + 2 * n - 1))
        k += 1
    return tuple(sorted(values)[:count])


def rayleigh_ritz_monotonic(system: CoupledSusySystem, residue: int, sizes, precision_bits=160):
    """Lowest eigenvalues for increasing basis sizes (for monotonicity checks)."""
    out = []
    for size in sizes:
        report = galerkin_spectrum(system, residue, size, precision_bits)
        out.append(report.computed)
    return out
