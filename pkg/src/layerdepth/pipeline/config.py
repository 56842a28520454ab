"""Vectorization pipeline configuration."""

from __future__ import annotations

from dataclasses import dataclass, asdict, fields


@dataclass
class PipelineConfig:
    filter_speckle: int = 4  # min connected-component area kept as its own cluster
    color_precision: int = 6  # bits per channel kept during quantization
    layer_difference: float = 16 / 255  # pre-ordering merge distance, RGB in [0,1]
    merge_tau: float = 0.05  # rank-adjacent merge threshold, L2 on RGB in [0,1]
    trace_epsilon: float = 0.0  # polygon simplification tolerance in pixels
    curve_fit: bool = False  # fit cubics to traced outlines

    def __post_init__(self):
        if not 1 <= self.color_precision <= 8:
            raise ValueError(f"color_precision must be in [1, 8], got {self.color_precision}")
        if self.merge_tau < 0:
            raise ValueError(f"merge_tau must be >= 0, got {self.merge_tau}")
        if self.filter_speckle < 0:
            raise ValueError(f"filter_speckle must be >= 0, got {self.filter_speckle}")
        if self.trace_epsilon < 0:
            raise ValueError(f"trace_epsilon must be >= 0, got {self.trace_epsilon}")

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        return asdict(self)
