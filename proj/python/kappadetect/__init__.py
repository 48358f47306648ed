"""kappa-profile rare category detection."""

from ._core import (
    ConfigError,
    DegenerateSecantSetError,
    DimensionError,
    EmptyInputError,
    Error,
    IncompatibleError,
    InsufficientRareClassError,
    IoError,
    KappaProfile,
    ParseError,
    RankError,
    SchemaError,
    detect,
    determine_threshold,
    gen_gaussian_majority,
    gen_manifold_samples,
    gen_trig_moment_curve,
    kappa,
    kappa_profile,
    load_dataset,
    profile_distance,
    profile_shifts,
    secants,
    singular_value_profile,
    solve,
)

__all__ = [name for name in dir() if not name.startswith("_")]
