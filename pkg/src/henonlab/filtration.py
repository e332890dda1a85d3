"""Escape-region filtration: certified radius and two-sided growth constants.

For a suitable R the wedge V_R^+ = {|y| >= max(|x|, R)} is forward
invariant under every generator and V_R^- = {|x| >= max(|y|, R)} backward
invariant, with m*|y|^d < |second coordinate of the image| < M*|y|^d.
Everything here derives (R, m, M) constructively from coefficient
magnitudes via the triangle inequality, so the constants are conservative
but certified.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .maps import ComplexPoint, HenonFactor, HenonMap

__all__ = [
    "Region",
    "FiltrationData",
    "FiltrationError",
    "factor_bounds",
    "find_filtration",
    "escape_radii",
    "region_of",
    "conjugate_inverse_factor",
    "conjugate_inverse_map",
]

_R_LIMIT = 2.0**60

# Strict margin for m_f * R^(d-1) > 1, the condition making V_R^+ forward
# invariant factor by factor (not just generator by generator).
_INVARIANCE_MARGIN = 1.0 + 1e-9


class FiltrationError(ValueError):
    """No admissible filtration radius below the search limit."""


class Region(enum.Enum):
    BIDISK = 0
    V_PLUS = 1
    V_MINUS = 2


def region_of(z: ComplexPoint, R: float) -> Region:
    """Total classification; ties |x| == |y| >= R go to V_PLUS."""
    if R <= 0:
        raise ValueError("R must be positive")
    ax, ay = abs(z[0]), abs(z[1])
    if ay >= ax and ay >= R:
        return Region.V_PLUS
    if ax >= ay and ax >= R:
        return Region.V_MINUS
    return Region.BIDISK


def conjugate_inverse_factor(f: HenonFactor) -> HenonFactor:
    """The inverse of f seen through the coordinate swap (x,y) -> (y,x).

    It is again a Henon factor, with polynomial p/a and parameter 1/a, so
    the inverse dynamics on V_R^- reduce to forward dynamics on V_R^+.
    """
    return HenonFactor(tuple(c / f.a for c in f.coeffs), 1.0 / f.a)


def conjugate_inverse_map(H: HenonMap) -> HenonMap:
    return HenonMap(tuple(conjugate_inverse_factor(f) for f in reversed(H.factors)))


def factor_bounds(f: HenonFactor, R: float) -> Optional[tuple[float, float]]:
    """Two-sided growth constants for one factor on V_R^+.

    Returns (m_f, M_f) with m_f*|y|^d <= |p(y) - a*x| <= M_f*|y|^d for all
    |y| >= max(|x|, R), or None when the lower bound degenerates
    (infeasible at this R).
    """
    if R <= 1.0:
        pass  # formula is still evaluated; small R simply comes out infeasible
    d = f.degree
    lead = abs(f.coeffs[-1])
    slack = sum(abs(f.coeffs[j]) * R ** (j - d) for j in range(d)) + abs(f.a) * R ** (1 - d)
    m_f = lead - slack
    M_f = lead + slack
    if m_f <= 0.0:
        return None
    return (m_f, M_f)


@dataclass(frozen=True)
class FiltrationData:
    """Certified filtration radius with composite growth constants.

    Satisfies 1 < R < m * R**d0, 0 < m < 1 < M, and the two-sided growth
    bound for every generator on V_R^+ (and, via the coordinate swap, for
    every generator inverse on V_R^-).
    """

    R: float
    m: float
    M: float
    d0: int
    per_factor: tuple[tuple[float, float, int], ...]
    per_generator: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not (1.0 < self.R < self.m * self.R**self.d0):
            raise ValueError("admissibility 1 < R < m*R^d0 violated")
        if not (0.0 < self.m < 1.0 < self.M):
            raise ValueError("need 0 < m < 1 < M")

    @property
    def M0(self) -> float:
        """max(|log m|, |log M|), the Cauchy-rate constant."""
        return max(abs(math.log(self.m)), abs(math.log(self.M)))


def _application_order(H: HenonMap) -> tuple[HenonFactor, ...]:
    return tuple(reversed(H.factors))


def _chain_bounds(
    factors: Sequence[HenonFactor], R: float
) -> Optional[tuple[float, float]]:
    """Chain per-factor bounds through a composition, in log space.

    Sound because every intermediate image stays in V_R^+ (guaranteed by
    the per-factor invariance margin checked in the search) where each
    factor's own (m_f, M_f) applies.
    """
    lo = hi = 0.0
    for f in factors:
        b = factor_bounds(f, R)
        if b is None:
            return None
        m_f, M_f = b
        if m_f * R ** (f.degree - 1) < _INVARIANCE_MARGIN:
            return None
        lo = f.degree * lo + math.log(m_f)
        hi = f.degree * hi + math.log(M_f)
    return (lo, hi)


def find_filtration(gens: Sequence[HenonMap]) -> FiltrationData:
    """Doubling search over R in {2, 4, 8, ...} for an admissible radius.

    Accepts the first power of two where (a) every factor of every
    generator, in both the forward and the swapped-inverse form, has a
    positive lower growth constant and satisfies the invariance margin,
    (b) chaining those bounds through each generator yields composite
    constants clamped to 0 < m < 1 < M, and (c) 1 < R < m*R^d0.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    chains = [_application_order(H) for H in gens]
    chains += [_application_order(conjugate_inverse_map(H)) for H in gens]
    d0 = min(H.degree for H in gens)

    R = 2.0
    while R <= _R_LIMIT:
        per_gen = [_chain_bounds(ch, R) for ch in chains]
        if all(b is not None for b in per_gen):
            m = math.exp(min(b[0] for b in per_gen))
            M = math.exp(max(b[1] for b in per_gen))
            m = min(m, 0.99)
            M = max(M, 1.01)
            if 1.0 < R < m * R**d0:
                per_factor = []
                for H in gens:
                    for f in _application_order(H):
                        m_f, M_f = factor_bounds(f, R)
                        per_factor.append((m_f, M_f, f.degree))
                fwd = per_gen[: len(gens)]
                per_generator = tuple(
                    (math.exp(lo), math.exp(hi)) for lo, hi in fwd
                )
                return FiltrationData(
                    R=R,
                    m=m,
                    M=M,
                    d0=d0,
                    per_factor=tuple(per_factor),
                    per_generator=per_generator,
                )
        R *= 2.0
    raise FiltrationError(
        f"no admissible radius up to 2^60; generator coefficients look misconfigured "
        f"(degrees {[H.degree for H in gens]})"
    )


def escape_radii(fd: FiltrationData, k: int) -> list[float]:
    """R_1 = R, R_j = m * R_{j-1}^d0; strictly increasing, +inf past range."""
    if k < 1:
        raise ValueError("k must be >= 1")
    out = [fd.R]
    for _ in range(k - 1):
        prev = out[-1]
        if math.isinf(prev):
            out.append(math.inf)
            continue
        try:
            nxt = fd.m * prev**fd.d0
        except OverflowError:
            nxt = math.inf
        out.append(nxt)
    return out
