"""Uncertainty products, their Robertson bounds, and the minimisers.

The ground states saturate the sector bounds (delta-gamma)|gamma|/4 and
(delta-gamma)delta/4; excited states exceed them strictly.  On the direct
sum, X and P reproduce the Heisenberg 1/2 for n = 1 and keep the bound
min(|gamma|, delta)/2 = 1/2 for every n.
"""

from fractions import Fraction

from coupledsusy import (
    SectorLabel,
    direct_sum,
    eigenstate,
    ground_states,
    make_xn_system,
    uncertainty_product_LA,
    uncertainty_product_tilde,
    uncertainty_product_XP,
)

for n in (1, 2):
    system = make_xn_system(n)
    psi0, _ = ground_states(system)
    print(f"n={n} (gamma={system.gamma}, delta={system.delta}):")

    la = uncertainty_product_LA(system, psi0)
    print(f"  sigma_L sigma_A on psi_0: {la.product:.12f} "
          f"(bound {la.bound:.12f}, gap {la.equality_gap:.1e})")

    for m in (1, 2):
        excited = uncertainty_product_LA(system, eigenstate(system, SectorLabel.PSI, m))
        print(f"  ... on psi_{m}: {excited.product:.6f} (strictly above)")

    phi_t0 = eigenstate(system, SectorLabel.PHI_TILDE, 0)
    tilde = uncertainty_product_tilde(system, phi_t0)
    print(f"  sigma_L~ sigma_A~ on phi~_0: {tilde.product:.12f} "
          f"(bound {tilde.bound:.12f})")

    xp = uncertainty_product_XP(system, direct_sum(psi0, 1, None, 0))
    print(f"  sigma_X sigma_P on (psi_0, 0): {xp.product:.12f} "
          f"(<X^2> = {xp.details['second_x']:.6f} = <P^2>)")

    mixed = uncertainty_product_XP(
        system,
        direct_sum(psi0, Fraction(1, 2), phi_t0, Fraction(1, 2)),
    )
    print(f"  equal mixture bound (convex combination): {mixed.bound:.6f}, "
          f"product {mixed.product:.6f}")
    print()
