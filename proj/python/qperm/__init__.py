"""Finite quantum permutation groups.

States and algebra elements are complex numpy vectors in the basis of the
group's algebra (``Group.labels``).
"""

from ._core import (  # noqa: F401
    ClassicalVersion,
    ConditioningError,
    Group,
    InputError,
    InvalidModel,
    NumericalError,
    birkhoff_slice,
    builtin,
    builtin_names,
    cesaro,
    classical_version,
    classify,
    condition,
    convolution_bounds,
    convolve,
    detect_period,
    experiment_names,
    fix_spectrum,
    fixed_point_distribution,
    from_json,
    is_group_like,
    is_idempotent,
    load,
    phase_region,
    quantum_fraction,
    random_state,
    reverse,
    run_experiment,
    subgroup_idempotent,
    thread_count,
    validate,
)

__version__ = "0.1.0"
