"""Collective decay of cold atoms coupled to a microring resonator.

Lengths are in units of the resonant wavelength and rates in units of the
single-atom free-space decay rate.
"""

from ._core import (
    ArrayParams,
    ArrayShape,
    AtomConfig,
    CavityMatrix,
    CavityParams,
    CloudParams,
    ConfigError,
    DarkPole,
    DefectiveMatrix,
    Error,
    InvalidArgument,
    NearCoincidence,
    array_map,
    build_array,
    calibrate_array,
    calibrate_cloud,
    cavity_matrix,
    cloud_ensemble,
    compare_models,
    content_hash,
    decay_metrics,
    eigendecompose,
    emit_config,
    experiments,
    free_space_matrix,
    from_positions,
    greens_pair,
    hankel0,
    hankel2,
    ring_vs_line,
    run,
    sample_cloud,
    spectrum,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
