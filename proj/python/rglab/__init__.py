"""Reset-growth master equation: stationary laws, transients and evolution."""

from ._core import (
    ConstantGrowthTransient,
    ConstantReset,
    LinearGrowthTransient,
    Modified,
    Original,
    RateFamily,
    RateSequence,
    RglabError,
    __version__,
    classify_r_tail,
    construct_adversarial,
    integrate,
    load_rates,
    mass_flux_report,
    normalize,
    q_iterate,
    run_invariant_suite,
    s0_compute,
)

__all__ = [
    "ConstantGrowthTransient",
    "ConstantReset",
    "LinearGrowthTransient",
    "Modified",
    "Original",
    "RateFamily",
    "RateSequence",
    "RglabError",
    "classify_r_tail",
    "construct_adversarial",
    "integrate",
    "load_rates",
    "mass_flux_report",
    "normalize",
    "q_iterate",
    "run_invariant_suite",
    "s0_compute",
]
