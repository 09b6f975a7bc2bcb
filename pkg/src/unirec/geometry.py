"""Native-resolution image geometry and visual token grid arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

MAX_WIDTH = 960
MAX_HEIGHT = 1408
PATCH = 32
FEATURE_DIM = 768


@dataclass(frozen=True)
class GeometrySpec:
    input_hw: tuple[int, int]
    scaled_hw: tuple[int, int]
    padded_hw: tuple[int, int]
    grid_hw: tuple[int, int]
    n_tokens: int
    feature_dim: int = FEATURE_DIM

    def to_dict(self) -> dict:
        return {
            "input": list(self.input_hw),
            "scaled": list(self.scaled_hw),
            "padded": list(self.padded_hw),
            "grid": list(self.grid_hw),
            "n_tokens": self.n_tokens,
            "feature_dim": self.feature_dim,
        }


def _ceil_to(value: int, step: int) -> int:
    return -(-value // step) * step


def fit_geometry(height: int, width: int) -> GeometrySpec:
    """Aspect-preserving downscale to the 960x1408 caps, padded to 32.

    Images already inside the caps are never upscaled, only padded.
    """
    if height < 1 or width < 1:
        raise ValueError("image dimensions must be positive")
    scale = min(MAX_WIDTH / width, MAX_HEIGHT / height, 1.0)
    scaled = (round(scale * height), round(scale * width))
    padded = (_ceil_to(scaled[0], PATCH), _ceil_to(scaled[1], PATCH))
    grid = (padded[0] // PATCH, padded[1] // PATCH)
    return GeometrySpec(
        input_hw=(height, width),
        scaled_hw=scaled,
        padded_hw=padded,
        grid_hw=grid,
        n_tokens=grid[0] * grid[1],
    )
