"""Quantum-correlation quantifiers for bipartite states."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: F401
    DimensionError,
    DiscordLabError,
    InvalidParameterError,
    InvalidStateError,
    OptimizerError,
    TruncationError,
    UnphysicalCovarianceError,
)
from .measures import (  # noqa: F401
    QCReport,
    adjusted_discord,
    analyze,
    entropic_discord,
    geometric_discord,
    geometric_discord_2xd,
    geometric_discord_numeric,
    hierarchy_gap,
    negativity,
    rescaled_discord,
    rescaled_discord_lower_bound,
    rescaled_discord_numeric,
)
from .optimize import OptimizerConfig  # noqa: F401
from .states import (  # noqa: F401
    DensityMatrix,
    ProjectiveMeasurement,
    apply_measurement,
    partial_trace,
    partial_transpose,
    purity,
    random_state,
    rescaled_distance,
    tensor_product,
    von_neumann_entropy,
)
