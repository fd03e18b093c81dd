"""Stability and superstability certification for many-body interaction families.

Thin Python layer over the C++ core: cube partitions, the inverse-power-sum
potential family, attractive tail integrals (closed-form bounds and a seeded
Monte Carlo oracle), certification of the sufficient conditions, and the
randomized falsifier.
"""

from ._core import (  # noqa: F401
    PerOrderParams,
    PotentialFamily,
    __version__,
    attractive_integral_bound_1d,
    attractive_integral_bound_ball,
    attractive_integral_monte_carlo,
    attractive_integral_per_cube,
    ball_volume,
    binomial_bounds_check,
    certify,
    composition_sum_check,
    cube_condition_margin,
    cube_index,
    default_ball_radius,
    in_cube_lower_bound,
    max_admissible_rib,
    max_repulsion_rib,
    occupancy,
    occupancy_power_sum,
    occupancy_weighted_sum_check,
    p_body_energy,
    p_body_value,
    pairwise_distance_sum,
    stability_rhs,
    superstability_falsifier,
    total_energy,
)
