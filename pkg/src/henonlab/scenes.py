"""Bundled example scenes used by the verification suite and the CLI.

Scene constants are frozen: the verification checks quote them, so edits
here invalidate recorded expectations.
"""

from __future__ import annotations

from dataclasses import dataclass

from .maps import HenonFactor, HenonMap, henon_map
from .semigroup import GeneratorSet, make_generator_set

__all__ = [
    "Scene",
    "two_gen",
    "three_gen",
    "single_classical",
    "attracting_pair",
    "scene_by_name",
    "SCENE_NAMES",
]


@dataclass(frozen=True)
class Scene:
    name: str
    gs: GeneratorSet
    notes: str = ""


def two_gen() -> Scene:
    """Two quadratic generators with visibly different filled sets."""
    H1 = henon_map((0, 0, 1), 1)              # (y, y^2 - x)
    H2 = henon_map((-1.1, 0, 1), 0.5)         # (y, y^2 - 1.1 - 0.5x)
    return Scene("two-gen", make_generator_set([H1, H2]))


def three_gen() -> Scene:
    """two_gen plus a genuine two-factor composite generator."""
    H1 = henon_map((0, 0, 1), 1)
    H2 = henon_map((-1.1, 0, 1), 0.5)
    H3 = HenonMap(
        (
            HenonFactor((0.2, 0, 0.9), -0.8),
            HenonFactor((0, 0, 1), 1),
        )
    )
    return Scene("three-gen", make_generator_set([H1, H2, H3]))


def single_classical(c: complex = -0.1 + 0.05j, a: complex = 0.05) -> Scene:
    """One strongly dissipative quadratic map, near-classical slice geometry."""
    H = henon_map((c, 0, 1), a)
    return Scene("single-classical", make_generator_set([H]))


def _attracting_composite(a1: float, a2: float, lin: float) -> HenonMap:
    """Composite of two factors contracting at the origin.

    Realizes (x,y) -> (a2*y, a2*x + p(y)) applied twice, p(y) = y^2 + lin*y,
    as a two-factor Henon map: outer factor p(y/a2), inner factor a2*p(y),
    both with parameter -a2*a1.
    """
    ap = -a2 * a1
    inner = HenonFactor((0, lin * a2, a2), ap)
    outer = HenonFactor((0, lin / a2, 1.0 / (a2 * a2)), ap)
    return HenonMap((outer, inner))


def attracting_pair(a_mag: float = 0.3) -> Scene:
    """Two composite generators uniformly attracting at the origin.

    Their one-map filled sets differ (different linear terms), which is
    what the escape-witness search needs.
    """
    G1 = _attracting_composite(a_mag, a_mag, 0.0)
    G2 = _attracting_composite(-a_mag, a_mag, 0.4)
    return Scene("attracting-pair", make_generator_set([G1, G2]))


_REGISTRY = {
    "two-gen": two_gen,
    "three-gen": three_gen,
    "single-classical": single_classical,
    "attracting-pair": attracting_pair,
}

SCENE_NAMES = tuple(sorted(_REGISTRY))


def scene_by_name(name: str) -> Scene:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise KeyError(f"unknown scene {name!r}; available: {', '.join(SCENE_NAMES)}")
