"""
Pydantic models for command-line run configuration.
"""
import math
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from dowkernet import __version__
from dowkernet.config import settings

OUTPUT_FORMATS = ("csv", "json", "svg", "newick")

# Fields that change where or how fast a run goes but never what it computes
_NOT_ECHOED = {"output", "threads"}


class RunConfig(BaseModel):
    """Everything a run depends on; echoed into every output it writes."""
    model_config = ConfigDict(frozen=True)

    command: str
    input: Optional[str] = None
    input_format: Optional[Literal["edge-list", "adjacency", "network-json"]] = None
    epsilon: float = settings.epsilon
    normalization: Literal["out", "in"] = settings.normalization
    max_dim: int = settings.max_dim
    homology_dims: int = settings.homology_dims
    reduced: bool = False
    cap: str = "sentinel"
    output: Optional[str] = None
    output_format: Optional[str] = None
    threads: int = 0
    seed: int = 0

    # bottleneck
    other: Optional[str] = None
    dims: Optional[List[int]] = None

    # centrality
    measure: Optional[str] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    reversed: bool = False
    katz_alpha: Optional[float] = None
    pagerank_alpha: Optional[float] = None
    hits_norm: Literal["l1", "l2"] = "l2"

    @field_validator("epsilon")
    @classmethod
    def _epsilon_in_unit_interval(cls, v: float) -> float:
        if not 0.0 < v < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        return v

    @field_validator("cap")
    @classmethod
    def _known_cap(cls, v: str) -> str:
        if v in ("sentinel", "inf"):
            return v
        try:
            value = float(v)
        except ValueError:
            raise ValueError("cap must be 'sentinel', 'inf' or a positive number") from None
        if not value > 0:
            raise ValueError("cap must be positive")
        return v

    @field_validator("output_format")
    @classmethod
    def _known_output_format(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {', '.join(OUTPUT_FORMATS)}")
        return v

    @model_validator(mode="after")
    def _dims_consistent(self) -> "RunConfig":
        if self.homology_dims < 0:
            raise ValueError("homology dims must be nonnegative")
        if self.max_dim < self.homology_dims + 1:
            raise ValueError(
                f"max_dim ({self.max_dim}) must be at least homology dims + 1 ({self.homology_dims + 1})"
            )
        return self

    @property
    def sentinel(self) -> float:
        return 1.0 - math.log(self.epsilon)

    @property
    def cap_value(self) -> Optional[float]:
        """None means the network's own sentinel."""
        if self.cap == "sentinel":
            return None
        return math.inf if self.cap == "inf" else float(self.cap)

    def metadata(self) -> Dict[str, object]:
        """The config as echoed into JSON outputs."""
        data = {"version": __version__}
        data.update(self.model_dump(exclude=_NOT_ECHOED))
        data["sentinel"] = self.sentinel
        return data

    def header_lines(self) -> List[str]:
        """``# key=value`` lines opening every CSV output."""
        return [f"# {key}={_render(value)}" for key, value in self.metadata().items()]


def _render(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return f"{value:.6g}"
    return "" if value is None else str(value)
