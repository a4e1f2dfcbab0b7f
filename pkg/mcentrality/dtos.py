from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Mapping, Optional

import numpy as np
import numpy.typing as npt

from mcentrality.errors import InvalidParameterError

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]


class ThresholdFormula(str, Enum):
    HMF = "hmf"
    HMF_CORRECTED = "hmf_corrected"


class Preference(str, Enum):
    DEGREE = "degree"
    UNIFORM = "uniform"


class EfficiencyNorm(str, Enum):
    RESIDUAL = "residual"
    ORIGINAL = "original"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    mean_degree: float
    max_degree: int
    mean_degree_sq: float
    max_coreness: int
    giant_size: int
    beta_th: float
    threshold_formula: ThresholdFormula = ThresholdFormula.HMF_CORRECTED


@dataclass(frozen=True, eq=False)
class CentralityVector:
    method: str
    scores: FloatArray
    params: Mapping[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.scores.shape[0])


@dataclass(frozen=True)
class EntropyWeights:
    mu: float
    entropy_global: float
    entropy_local: float
    degenerate: tuple[str, ...] = ()

    @property
    def weights(self) -> tuple[float, float]:
        return self.mu, 1.0 - self.mu


@dataclass(frozen=True, eq=False)
class MCentralityVector:
    scores: FloatArray
    mu_used: float
    coreness: IntArray
    delta_d: FloatArray
    weights: Optional[EntropyWeights] = None

    def as_centrality(self) -> CentralityVector:
        params: dict[str, Any] = {"mu": self.mu_used}
        if self.weights is None:
            params["mu_source"] = "override"
        else:
            params["mu_source"] = "entropy"
        return CentralityVector(method="m", scores=self.scores, params=params)


@dataclass(frozen=True, eq=False)
class RankingList:
    """Nodes in descending score order; ``ranks`` uses competition ranking."""

    order: IntArray
    ranks: IntArray
    group_sizes: IntArray

    @property
    def n(self) -> int:
        return int(self.order.shape[0])

    @property
    def tie_groups(self) -> list[IntArray]:
        bounds = np.cumsum(self.group_sizes)[:-1]
        return [np.asarray(g) for g in np.split(self.order, bounds)]


@dataclass(frozen=True)
class TauResult:
    tau: float
    degenerate: bool = False


@dataclass(frozen=True)
class AttackStep:
    step: int
    removed: Optional[int]
    removed_label: Optional[str]
    components: int
    giant: int
    eta: float
    nu: float


@dataclass(frozen=True)
class AttackReport:
    order: tuple[int, ...]
    eta0: float
    steps: tuple[AttackStep, ...]
    normalization: EfficiencyNorm = EfficiencyNorm.RESIDUAL


@dataclass(frozen=True)
class RboParams:
    p: float
    depth: Optional[int] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.p < 1.0:
            raise InvalidParameterError(f"RBO persistence must lie in (0, 1), got {self.p}")
        if self.depth is not None and self.depth < 1:
            raise InvalidParameterError("RBO depth must be at least 1")


@dataclass(frozen=True)
class SirConfig:
    beta: float = 0.0
    runs: int = 100
    master_seed: int = 0
    gamma: float = 1.0
    workers: int = 1

    def __post_init__(self) -> None:
        if not 0.0 <= self.beta <= 1.0:
            raise InvalidParameterError(f"beta must lie in [0, 1], got {self.beta}")
        if self.gamma != 1.0:
            raise InvalidParameterError("only gamma = 1 is supported")
        if self.runs < 1:
            raise InvalidParameterError("runs must be positive")
        if not 0 <= self.master_seed < 2**64:
            raise InvalidParameterError("master seed must be an unsigned 64-bit integer")
        if self.workers < 1:
            raise InvalidParameterError("workers must be positive")


@dataclass(frozen=True, eq=False)
class SirInfluence:
    means: FloatArray
    std_errors: FloatArray
    beta: float
    runs: int


DEFAULT_BETA_FRACTIONS = (0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.6)


@dataclass(frozen=True)
class BetaGrid:
    fractions: tuple[float, ...] = DEFAULT_BETA_FRACTIONS

    def __post_init__(self) -> None:
        if not self.fractions:
            raise InvalidParameterError("beta grid is empty")
        if any(f < 0 for f in self.fractions):
            raise InvalidParameterError("beta fractions must be non-negative")
        if any(b <= a for a, b in zip(self.fractions, self.fractions[1:])):
            raise InvalidParameterError("beta fractions must be strictly increasing")


@dataclass(frozen=True)
class CorrelationRecord:
    method: str
    beta: float
    beta_frac: float
    tau: float
    degenerate: bool


@dataclass(frozen=True)
class MethodComparison:
    method: str
    monotonicity: float
    tau: float
    degenerate: bool


@dataclass(frozen=True)
class MethodParams:
    mu: Optional[float] = None
    radius: int = 3
    ell: int = 3
    teleport: float = 0.15
    preference: Preference = Preference.DEGREE

    def __post_init__(self) -> None:
        if self.mu is not None and not 0.0 <= self.mu <= 1.0:
            raise InvalidParameterError(f"mu must lie in [0, 1], got {self.mu}")
        if self.radius < 1 or self.ell < 1:
            raise InvalidParameterError("radius and ell must be at least 1")
        if not 0.0 < self.teleport < 1.0:
            raise InvalidParameterError("teleport probability must lie in (0, 1)")


@dataclass(frozen=True)
class ExperimentConfig:
    input_path: str
    lcc: bool = True
    methods: tuple[str, ...] = ("m",)
    params: MethodParams = field(default_factory=MethodParams)
    mu_values: tuple[float, ...] = ()
    beta_fractions: tuple[float, ...] = DEFAULT_BETA_FRACTIONS
    runs: int = 100
    master_seed: int = 0
    output_dir: str = "."
    output_format: OutputFormat = OutputFormat.CSV
    precision: Optional[int] = None
    top: Optional[int] = None
    workers: int = 1
    record: bool = False

    def __post_init__(self) -> None:
        if any(not 0.0 <= mu <= 1.0 for mu in self.mu_values):
            raise InvalidParameterError("mu values must lie in [0, 1]")
        if any(f < 0 for f in self.beta_fractions):
            raise InvalidParameterError("beta fractions must be non-negative")
        if self.top is not None and self.top < 0:
            raise InvalidParameterError("--top must be non-negative")
