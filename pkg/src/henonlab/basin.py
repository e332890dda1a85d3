"""Attracting parameters, non-autonomous basin membership, boundary probes.

All generators must fix the origin for the attracting machinery; once a
ball B(0;r) with contraction factor alpha < 1 is found, entering it
certifies convergence and entering the escape wedge certifies divergence,
so membership verdicts are two-sided certificates.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ._kernels import PLUS
from .classify import Verdict, classify_point
from .green import SequenceSpec
from .maps import FORWARD, ComplexPoint, eval_map, sup_norm
from .semigroup import GeneratorSet, Word

__all__ = [
    "AttractingParams",
    "BasinVerdict",
    "BasinResult",
    "NotAttracting",
    "estimate_attracting_params",
    "basin_membership",
    "boundary_bisect",
    "strong_K_escape_witness",
]

_ALPHA_ACCEPT = 0.95
_R_FLOOR = 1e-6


class NotAttracting(Exception):
    """No sampled radius down to the floor gave a contraction factor <= 0.95."""


@dataclass(frozen=True)
class AttractingParams:
    """Sampled contraction data: ||H_i(z)|| <= alpha*||z|| on B(0; r)."""

    r: float
    alpha: float
    samples: int
    seed: int


class BasinVerdict(enum.Enum):
    CONVERGED = 0
    DIVERGED = 1
    UNDETERMINED = 2


@dataclass(frozen=True)
class BasinResult:
    verdict: BasinVerdict
    steps: int


def _ball_samples(rng: np.random.Generator, r: float, count: int) -> list[ComplexPoint]:
    """Seeded points of B(0; r) in the sup norm.

    Half the samples sit exactly on the sphere ||z|| = r, where the
    contraction ratio peaks; the rest fill the ball.
    """
    out = []
    for i in range(count):
        mag = r if i % 2 == 0 else r * (1.0 - rng.random() ** 2)
        which = rng.random() < 0.5
        phase1 = 2.0 * math.pi * rng.random()
        phase2 = 2.0 * math.pi * rng.random()
        other = mag * rng.random()
        big = mag * complex(math.cos(phase1), math.sin(phase1))
        small = other * complex(math.cos(phase2), math.sin(phase2))
        out.append(ComplexPoint(big, small) if which else ComplexPoint(small, big))
    return out


def estimate_attracting_params(
    gs: GeneratorSet,
    r_max: float = 1.0,
    samples: int = 400,
    seed: int = 7070,
) -> AttractingParams:
    """Halving search on r for a sampled contraction factor <= 0.95.

    Requires every generator to fix the origin.  Sampling-based, not a
    certified global bound; the sample count and seed are recorded so the
    estimate is reproducible and re-checkable.
    """
    origin = ComplexPoint(0j, 0j)
    for H in gs.gens:
        if sup_norm(eval_map(H, origin, FORWARD)) > 1e-12:
            raise ValueError("all generators must fix the origin")
    rng = np.random.default_rng(seed)
    r = r_max
    while r >= _R_FLOOR:
        alpha = 0.0
        ok = True
        for z in _ball_samples(rng, r, samples):
            nz = sup_norm(z)
            if nz == 0.0:
                continue
            for H in gs.gens:
                ratio = sup_norm(eval_map(H, z, FORWARD)) / nz
                if ratio > alpha:
                    alpha = ratio
                if alpha > _ALPHA_ACCEPT:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return AttractingParams(r=r, alpha=alpha, samples=samples, seed=seed)
        r *= 0.5
    raise NotAttracting(f"no contracting radius found down to {_R_FLOOR}")


def basin_membership(
    gs: GeneratorSet,
    seq: SequenceSpec,
    z: ComplexPoint,
    max_steps: int,
    ap: AttractingParams,
) -> BasinResult:
    """Iterate the sequence; entering B(0;r) certifies convergence to 0,
    entering the escape wedge certifies divergence."""
    idx = seq.materialize(gs.n0, None)
    R = gs.filtration.R
    w = z
    for step in range(max_steps + 1):
        ax, ay = abs(w[0]), abs(w[1])
        if max(ax, ay) <= ap.r:
            return BasinResult(BasinVerdict.CONVERGED, step)
        if ay >= ax and ay >= R:
            return BasinResult(BasinVerdict.DIVERGED, step)
        if step == max_steps:
            break
        if step >= len(idx):
            raise ValueError("sequence shorter than max_steps")
        w = eval_map(gs.gens[idx[step] - 1], w, FORWARD)
    return BasinResult(BasinVerdict.UNDETERMINED, max_steps)


def boundary_bisect(
    gs: GeneratorSet,
    seq: SequenceSpec,
    z_in: ComplexPoint,
    z_out: ComplexPoint,
    tol: float,
    max_steps: int = 400,
    ap: Optional[AttractingParams] = None,
) -> ComplexPoint:
    """Bisect the segment [z_in, z_out] to a basin-boundary bracket.

    z_in must be CONVERGED, z_out must be DIVERGED at max_steps.  The
    returned midpoint sits within tol (in segment parameter) of a verdict
    flip: the inner bracket end converges, the outer one does not.
    """
    if ap is None:
        ap = estimate_attracting_params(gs)

    def verdict_at(t: float) -> BasinVerdict:
        w = ComplexPoint(
            z_in[0] + t * (z_out[0] - z_in[0]),
            z_in[1] + t * (z_out[1] - z_in[1]),
        )
        return basin_membership(gs, seq, w, max_steps, ap).verdict

    if verdict_at(0.0) != BasinVerdict.CONVERGED:
        raise ValueError("z_in does not converge at max_steps")
    if verdict_at(1.0) != BasinVerdict.DIVERGED:
        raise ValueError("z_out does not diverge at max_steps")
    span = max(abs(z_out[0] - z_in[0]), abs(z_out[1] - z_in[1]))
    t_in, t_out = 0.0, 1.0
    while (t_out - t_in) * span > tol:
        mid = 0.5 * (t_in + t_out)
        if verdict_at(mid) == BasinVerdict.CONVERGED:
            t_in = mid
        else:
            t_out = mid
    t_star = 0.5 * (t_in + t_out)
    return ComplexPoint(
        z_in[0] + t_star * (z_out[0] - z_in[0]),
        z_in[1] + t_star * (z_out[1] - z_in[1]),
    )


def strong_K_escape_witness(
    gs: GeneratorSet,
    seq: SequenceSpec,
    z: ComplexPoint,
    depth: int = 10,
    node_budget: int = 2**20,
) -> Optional[Word]:
    """Word expelling z to the escape wedge, if one is found within depth.

    A witness proves z lies outside the strong filled set even when the
    given sequence attracts it; absence at this budget is inconclusive.
    """
    cls = classify_point(gs, z, PLUS, depth, node_budget)
    if cls.verdict in (Verdict.ESCAPING_WEAK, Verdict.ESCAPING_STRONG):
        return cls.witness
    return None
