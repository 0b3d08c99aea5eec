"""Behavioral simulator and design-space explorer for a mismatch-based
analog ELM classifier array.

Subpackages/modules:
  chip       device-level model: DAC, mismatch weights, oscillator neurons
  elm        hidden-matrix construction, ridge training, quantization
  expansion  weight-reuse rotations (virtual hidden count / input dimension)
  analysis   noise, speed and energy closed forms plus quadrature
  data       dataset containers, loaders, scaling, sinc generator
  catalog    benchmark dataset registry (ELMCHIP_DATA_DIR)
  explorer   sweep/benchmark/robustness experiment drivers
  cli        `elmchip` command-line entry point
"""
from .chip import (
    ChipConfig,
    WeightMatrix,
    dac_current,
    forward,
    hidden_count,
    input_currents,
    map_input,
    neuron_counts,
    neuron_frequency,
    nominal_config,
    reference_current,
    sample_mismatch,
    with_vdd,
)
from .elm import (
    HiddenMatrix,
    OutputWeights,
    RidgeSpec,
    build_hidden_matrix,
    classify,
    cross_validate_ridge,
    load_model,
    normalize_hidden,
    predict,
    quantize_weights,
    save_model,
    train_output_weights,
)
from .expansion import (
    VirtualShape,
    build_virtual_matrix,
    extended_forward,
    extended_hidden,
    rotate_cols,
    rotate_rows,
    virtual_forward,
    virtual_hidden_matrix,
)
from .analysis import (
    EnergyConstants,
    EnergyReport,
    SpeedReport,
    energy_per_conversion,
    energy_per_mac,
    energy_per_spike,
    snr_mirror,
    speed_report,
    temperature_weights,
)
from .data import Dataset, generate_sinc, load_dense_csv, load_sparse
from .catalog import load_benchmark
from .errors import (
    CapacityError,
    ConfigError,
    DataError,
    ElmChipError,
    InputDomainError,
    ModelDomainError,
    NoOscillationError,
    ShapeError,
    SingularMatrixError,
)

__version__ = "0.1.0"

__all__ = [
    "ChipConfig",
    "WeightMatrix",
    "dac_current",
    "forward",
    "hidden_count",
    "input_currents",
    "map_input",
    "neuron_counts",
    "neuron_frequency",
    "nominal_config",
    "reference_current",
    "sample_mismatch",
    "with_vdd",
    "HiddenMatrix",
    "OutputWeights",
    "RidgeSpec",
    "build_hidden_matrix",
    "classify",
    "cross_validate_ridge",
    "load_model",
    "normalize_hidden",
    "predict",
    "quantize_weights",
    "save_model",
    "train_output_weights",
    "VirtualShape",
    "build_virtual_matrix",
    "extended_forward",
    "extended_hidden",
    "rotate_cols",
    "rotate_rows",
    "virtual_forward",
    "virtual_hidden_matrix",
    "EnergyConstants",
    "EnergyReport",
    "SpeedReport",
    "energy_per_conversion",
    "energy_per_mac",
    "energy_per_spike",
    "snr_mirror",
    "speed_report",
    "temperature_weights",
    "Dataset",
    "generate_sinc",
    "load_dense_csv",
    "load_sparse",
    "load_benchmark",
    "CapacityError",
    "ConfigError",
    "DataError",
    "ElmChipError",
    "InputDomainError",
    "ModelDomainError",
    "NoOscillationError",
    "ShapeError",
    "SingularMatrixError",
    "__version__",
]
