"""Complex-affine slice geometry for grid computations.

A slice is parameterized by one complex coordinate w over a rectangular
window, mapped affinely into C^2, so second-order operators restrict
correctly.  Pixels are row-major with the top row at maximal Im(w) and
values sampled at pixel centers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .maps import ComplexPoint

__all__ = ["SliceSpec", "vertical_line", "horizontal_line", "affine_plane"]


@dataclass(frozen=True)
class SliceSpec:
    kind: str  # "vertical" | "horizontal" | "plane"
    origin: tuple[complex, complex]
    basis: tuple[complex, complex]
    window: tuple[float, float, float, float]  # re_min, im_min, re_max, im_max
    nx: int
    ny: int

    def __post_init__(self) -> None:
        if self.nx < 8 or self.ny < 8:
            raise ValueError("grid sizes must be at least 8")
        re_min, im_min, re_max, im_max = self.window
        if not (re_max > re_min and im_max > im_min):
            raise ValueError("degenerate window")
        if self.basis == (0j, 0j):
            raise ValueError("zero basis vector")

    @property
    def hx(self) -> float:
        return (self.window[2] - self.window[0]) / self.nx

    @property
    def hy(self) -> float:
        return (self.window[3] - self.window[1]) / self.ny

    def param_axes(self) -> tuple[np.ndarray, np.ndarray]:
        """Pixel-center coordinates: re ascending, im descending (top row first)."""
        re_min, im_min, re_max, im_max = self.window
        re = re_min + (np.arange(self.nx) + 0.5) * self.hx
        im = im_max - (np.arange(self.ny) + 0.5) * self.hy
        return re, im

    def row_points(self, iy: int) -> tuple[np.ndarray, np.ndarray]:
        """C^2 coordinates of row iy as two complex arrays (x, y)."""
        re, im = self.param_axes()
        w = re + 1j * im[iy]
        zx = self.origin[0] + w * self.basis[0]
        zy = self.origin[1] + w * self.basis[1]
        return zx.astype(np.complex128), zy.astype(np.complex128)

    def point_at(self, ix: int, iy: int) -> ComplexPoint:
        re, im = self.param_axes()
        w = complex(re[ix], im[iy])
        return ComplexPoint(self.origin[0] + w * self.basis[0],
                            self.origin[1] + w * self.basis[1])

    def rows(self) -> Iterator[int]:
        return iter(range(self.ny))


def vertical_line(x0: complex, window, nx: int, ny: int) -> SliceSpec:
    """The line {x = x0}, parameterized by the y coordinate."""
    return SliceSpec("vertical", (complex(x0), 0j), (0j, 1 + 0j), tuple(window), nx, ny)


def horizontal_line(y0: complex, window, nx: int, ny: int) -> SliceSpec:
    """The line {y = y0}, parameterized by the x coordinate."""
    return SliceSpec("horizontal", (0j, complex(y0)), (1 + 0j, 0j), tuple(window), nx, ny)


def affine_plane(origin, basis, window, nx: int, ny: int) -> SliceSpec:
    return SliceSpec(
        "plane",
        (complex(origin[0]), complex(origin[1])),
        (complex(basis[0]), complex(basis[1])),
        tuple(window),
        nx,
        ny,
    )
