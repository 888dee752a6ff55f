"""Multi-port selection simulator for slow-FAMA fluid-antenna receivers."""

from .errors import (
    BudgetExceededError,
    FamaportError,
    InvalidArgumentError,
    InvalidConfigError,
    NumericDomainError,
)
from .gev import (
    GevSolution,
    PortSet,
    combiner_sinr,
    dominant_gev,
    rank1_gev,
    restrict,
    spectral_efficiency,
    subset_sinr,
)
from .harness import (
    DatasetRecord,
    PortFeatures,
    SweepRecord,
    SweepSpec,
    bench_timing,
    export_dataset,
    export_golden,
    extract_features,
    generate_dataset,
    load_dataset,
    run_sweep,
    write_sweep_csv,
)
from .model import (
    ChannelRealization,
    CorrelationModel,
    SignalModel,
    SystemConfig,
    build_correlation,
    build_signal_model,
    make_instance,
    sample_channel,
)
from .selectors import (
    ALGORITHMS,
    PortSelection,
    run_algorithm,
    select_cuma,
    select_dc,
    select_exhaustive,
    select_geport,
    select_gfwd,
    select_gfwd_swap,
    select_slow_fama,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "BudgetExceededError",
    "ChannelRealization",
    "CorrelationModel",
    "DatasetRecord",
    "FamaportError",
    "GevSolution",
    "InvalidArgumentError",
    "InvalidConfigError",
    "NumericDomainError",
    "PortFeatures",
    "PortSelection",
    "PortSet",
    "SignalModel",
    "SweepRecord",
    "SweepSpec",
    "SystemConfig",
    "bench_timing",
    "build_correlation",
    "build_signal_model",
    "combiner_sinr",
    "dominant_gev",
    "export_dataset",
    "export_golden",
    "extract_features",
    "generate_dataset",
    "load_dataset",
    "make_instance",
    "rank1_gev",
    "restrict",
    "run_algorithm",
    "run_sweep",
    "sample_channel",
    "select_cuma",
    "select_dc",
    "select_exhaustive",
    "select_geport",
    "select_gfwd",
    "select_gfwd_swap",
    "select_slow_fama",
    "spectral_efficiency",
    "subset_sinr",
    "write_sweep_csv",
]
