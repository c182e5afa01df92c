"""Volterra-process simulation with jump drivers and regularity estimators.

Thin Python facade over the C++ core: kernels, cadlag drivers, dual-route
stochastic-integral evaluation, fractional paths and the modulus/exponent
estimators, plus the experiment runner used by the CLI.
"""

from volterra._core import (  # noqa: F401
    CadlagPath,
    ConfigError,
    DriverKind,
    DriverSpec,
    FracLevyPath,
    HolderFit,
    IncrementDecomposition,
    JumpLaw,
    JumpLawKind,
    Kernel,
    KernelKind,
    QuadratureError,
    __version__,
    check_smooth_variation,
    decompose_increment,
    default_truncation_T,
    eval_by_parts,
    eval_direct,
    eval_fraclevy,
    f_delta,
    fdelta_functional,
    g_delta,
    gdelta_functional,
    holder_exponent,
    make_two_sided,
    pointwise_ratio_scan,
    run_experiment,
    simulate,
    sup_jump,
    tail_increment,
    truncation_tail_bound,
    uniform_modulus_scan,
    validate_config,
)
