"""Slice fields, discrete Laplacian densities and slice-mass integration.

On a complex line the current (1/2pi) dd^c G restricts to (1/2pi) times
the ordinary Laplacian of the restricted potential, so a 5-point stencil
over a sampled field estimates the measure trace on the slice.  The
stencil sum telescopes to a discrete boundary flux, which is what makes
the slice-mass check robust to smooth midpoint error.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._kernels import MINUS, PLUS
from .green import DEFAULT_NODE_BUDGET, packed_for
from .maps import ComplexPoint
from .semigroup import BudgetError, GeneratorSet
from .slices import SliceSpec

__all__ = [
    "SliceGrid",
    "sample_green_on_slice",
    "laplacian_density",
    "julia_heatmap",
    "equidist_potential",
]

# Per-pixel interval width above which a density pixel is reported as
# untrusted (the stencil amplifies width by ~4/h^2).
WIDTH_GATE_FACTOR = 0.1

GRID_MAX_DEPTH = 14
GRID_TAIL_DEPTH = 36


@dataclass
class SliceGrid:
    """A scalar field sampled over a slice, plus per-field metadata."""

    spec: SliceSpec
    values: np.ndarray  # float64 (ny, nx)
    meta: dict = field(default_factory=dict)

    @property
    def nx(self) -> int:
        return self.spec.nx

    @property
    def ny(self) -> int:
        return self.spec.ny


def sample_green_on_slice(
    gs: GeneratorSet,
    spec: SliceSpec,
    sign: int = PLUS,
    max_depth: int = GRID_MAX_DEPTH,
    tail_depth: int = GRID_TAIL_DEPTH,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> SliceGrid:
    """Field of certified-interval midpoints; widths kept in meta["widths"]."""
    pk = packed_for(gs, sign)
    mids = np.empty((spec.ny, spec.nx), dtype=np.float64)
    widths = np.empty((spec.ny, spec.nx), dtype=np.float64)
    flags = np.zeros((spec.ny, spec.nx), dtype=np.int8)

    def fill_row(iy: int) -> None:
        zx, zy = spec.row_points(iy)
        if sign == MINUS:
            zx, zy = zy, zx
        lo = np.empty(spec.nx, dtype=np.float64)
        hi = np.empty(spec.nx, dtype=np.float64)
        leaves = np.empty(spec.nx, dtype=np.int64)
        fl = np.empty(spec.nx, dtype=np.int8)
        _kernels.green_estimate_rows(
            pk, zx, zy, max_depth, tail_depth, node_budget, lo, hi, leaves, fl
        )
        mids[iy] = 0.5 * (lo + hi)
        widths[iy] = hi - lo
        flags[iy] = fl

    if threads <= 1:
        for iy in spec.rows():
            fill_row(iy)
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(fill_row, spec.rows()))

    return SliceGrid(
        spec=spec,
        values=mids,
        meta={
            "field": "green_mid",
            "sign": sign,
            "widths": widths,
            "max_width": float(widths.max()),
            "flagged_pixels": int(flags.sum()),
            "max_depth": max_depth,
            "tail_depth": tail_depth,
        },
    )


def laplacian_density(grid: SliceGrid) -> tuple[SliceGrid, float]:
    """5-point stencil density (value / 2pi per unit slice area).

    Interior pixels only; the boundary ring is zero.  Returns the density
    grid and the total mass (density integrated over the interior), which
    equals the discrete boundary flux of the potential by telescoping.
    """
    spec = grid.spec
    hx, hy = spec.hx, spec.hy
    if abs(hx - hy) > 1e-12 * max(hx, hy):
        raise ValueError("laplacian_density requires uniform square spacing")
    u = grid.values
    lap = np.zeros_like(u)
    lap[1:-1, 1:-1] = (
        u[1:-1, 2:] + u[1:-1, :-2] + u[2:, 1:-1] + u[:-2, 1:-1] - 4.0 * u[1:-1, 1:-1]
    ) / (hx * hx)
    density = lap / (2.0 * math.pi)
    total_mass = float(density[1:-1, 1:-1].sum() * hx * hx)

    meta = {"field": "laplacian_density", "source": grid.meta.get("field"),
            "total_mass": total_mass}
    widths = grid.meta.get("widths")
    if widths is not None:
        gate = WIDTH_GATE_FACTOR * hx * hx
        gated = widths[1:-1, 1:-1] > gate
        meta["width_gate"] = gate
        meta["gated_pixels"] = int(gated.sum())
        meta["gated_mass"] = float((density[1:-1, 1:-1] * gated).sum() * hx * hx)
    return SliceGrid(spec=spec, values=density, meta=meta), total_mass


def julia_heatmap(
    gs: GeneratorSet,
    spec: SliceSpec,
    sign: int = PLUS,
    max_depth: int = GRID_MAX_DEPTH,
    tail_depth: int = GRID_TAIL_DEPTH,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> SliceGrid:
    """Clamped-positive density of the sampled Green field.

    Bright pixels trace the slice of the measure's support, i.e. the
    Julia set seen by this slice.
    """
    sampled = sample_green_on_slice(
        gs, spec, sign, max_depth, tail_depth, node_budget, threads
    )
    density, total = laplacian_density(sampled)
    heat = np.clip(density.values, 0.0, None)
    meta = dict(density.meta)
    meta["field"] = "julia_heatmap"
    meta["total_mass"] = total
    meta["widths"] = sampled.meta["widths"]
    return SliceGrid(spec=spec, values=heat, meta=meta)


def equidist_potential(
    gs: GeneratorSet,
    q_coeffs: np.ndarray,
    z: ComplexPoint,
    k: int,
    sign: int = PLUS,
    _retry: int = 4,
) -> float:
    """Average of log|q(word(z))| over all depth-k words, weight D^-k.

    q_coeffs[a, b] is the coefficient of x^a y^b of a nonzero bivariate
    polynomial; the resulting value is the potential of the averaged
    pullback of the curve {q = 0}.  Hitting an exact zero of q along the
    word tree raises after a few jittered retries (measure-zero event).
    """
    qc = np.asarray(q_coeffs, dtype=np.complex128)
    if qc.ndim != 2 or not np.any(qc):
        raise ValueError("q must be a nonzero 2-d coefficient table")
    if gs.n0**k > 2**22:
        raise BudgetError(f"{gs.n0}^{k} words exceed the equidistribution budget")
    pk = packed_for(gs, sign)
    if sign == MINUS:
        qc = qc.T.copy()  # the coordinate swap transposes monomials
    zz = z
    for attempt in range(_retry):
        zx, zy = (zz[0], zz[1]) if sign == PLUS else (zz[1], zz[0])
        value, hit_zero = _kernels.equidist_point(pk, qc, complex(zx), complex(zy), k)
        if not hit_zero:
            return value
        jitter = 1e-9 * (attempt + 1)
        zz = ComplexPoint(zz[0] + jitter, zz[1] + 1j * jitter)
    raise ArithmeticError("q vanished along the word tree at every retry")
