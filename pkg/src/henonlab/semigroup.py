"""Generator sets, word enumeration and the minimal generating set.

Words are index tuples, outermost first: (i1, ..., ik) denotes the
composition H_i1 o ... o H_ik, so the last index is applied first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .filtration import FiltrationData, find_filtration
from .maps import FORWARD, INVERSE, ComplexPoint, HenonMap, eval_map

__all__ = [
    "GeneratorSet",
    "Word",
    "BudgetError",
    "make_generator_set",
    "words",
    "word_count",
    "eval_word",
    "maps_equal_probabilistic",
    "minimal_generating_set",
]

_WORD_BUDGET_BITS = 40.0
_MINIMAL_SEARCH_BUDGET = 200_000


class BudgetError(RuntimeError):
    """An enumeration or traversal exceeded its configured budget."""


@dataclass(frozen=True)
class Word:
    """Indices into a generator set (1-based), outermost first."""

    indices: tuple[int, ...]
    degree: int

    def __post_init__(self) -> None:
        if not self.indices:
            raise ValueError("empty word")

    def __len__(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generators H_1..H_n0 with total degree D and filtration."""

    gens: tuple[HenonMap, ...]
    D: int
    filtration: FiltrationData

    def __post_init__(self) -> None:
        if not self.gens:
            raise ValueError("need at least one generator")
        if self.D != sum(H.degree for H in self.gens):
            raise ValueError("D must be the sum of generator degrees")

    @property
    def n0(self) -> int:
        return len(self.gens)

    def map_of(self, w: Word) -> HenonMap:
        """The composed map the word denotes."""
        out = self.gens[w.indices[0] - 1]
        for i in w.indices[1:]:
            out = out * self.gens[i - 1]
        return out


def make_generator_set(maps: Sequence[HenonMap]) -> GeneratorSet:
    maps = tuple(maps)
    fd = find_filtration(maps)
    return GeneratorSet(gens=maps, D=sum(H.degree for H in maps), filtration=fd)


def word_count(gs: GeneratorSet, k: int) -> int:
    return gs.n0**k


def words(gs: GeneratorSet, k: int) -> Iterator[Word]:
    """All n0^k words of length k in lexicographic index order."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k * math.log2(max(gs.n0, 2)) > _WORD_BUDGET_BITS and gs.n0 > 1:
        raise BudgetError(f"refusing to enumerate {gs.n0}^{k} words")
    degs = [H.degree for H in gs.gens]
    for idx in itertools.product(range(1, gs.n0 + 1), repeat=k):
        d = 1
        for i in idx:
            d *= degs[i - 1]
        yield Word(indices=idx, degree=d)


def eval_word(
    gs: GeneratorSet, w: Word, z: ComplexPoint, direction: int = FORWARD
) -> ComplexPoint:
    """Apply the word's map (or its inverse) to z.

    Forward applies the innermost generator first; the inverse applies
    generator inverses outermost-first, so forward then inverse is the
    identity up to rounding.
    """
    if direction == FORWARD:
        for i in reversed(w.indices):
            z = eval_map(gs.gens[i - 1], z, FORWARD)
    elif direction == INVERSE:
        for i in w.indices:
            z = eval_map(gs.gens[i - 1], z, INVERSE)
    else:
        raise ValueError("direction must be FORWARD (1) or INVERSE (-1)")
    return z


def maps_equal_probabilistic(
    A: HenonMap, B: HenonMap, trials: int = 64, seed: int = 20240901
) -> bool:
    """Polynomial-identity test at seeded random points of the bidisk of radius 2.

    One-sided: distinct polynomial maps agree on all sampled points with
    vanishing probability, while equal maps always pass.
    """
    if trials < 16:
        raise ValueError("trials must be at least 16")
    if A.degree != B.degree:
        return False
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-2.0, 2.0, size=(trials, 4))
    for px, ix, py, iy in pts:
        z = ComplexPoint(complex(px, ix), complex(py, iy))
        az = eval_map(A, z, FORWARD)
        bz = eval_map(B, z, FORWARD)
        tol = 1e-8 * (1.0 + max(abs(az.x), abs(az.y)))
        if max(abs(az.x - bz.x), abs(az.y - bz.y)) > tol:
            return False
    return True


def _expressible(
    H: HenonMap, pool: Sequence[HenonMap], budget: list[int]
) -> bool:
    """Is H a composition (length >= 2) of elements of pool?

    Degrees multiply, so candidate words are pruned by divisibility of the
    remaining degree; comparison is by the probabilistic equality test.
    """
    target = H.degree

    def search(remaining: int, prefix: Optional[HenonMap], length: int) -> bool:
        if budget[0] <= 0:
            return False
        if remaining == 1:
            if length < 2 or prefix is None:
                return False
            budget[0] -= 1
            return maps_equal_probabilistic(prefix, H)
        for g in pool:
            d = g.degree
            if d > remaining or remaining % d != 0:
                continue
            budget[0] -= 1
            nxt = g if prefix is None else prefix * g
            if search(remaining // d, nxt, length + 1):
                return True
        return False

    return search(target, None, 0)


def minimal_generating_set(gs: GeneratorSet) -> GeneratorSet:
    """Drop generators expressible as words (length >= 2) in the others.

    Processes candidates by increasing degree: a composite has degree at
    least twice that of each part, so only strictly smaller retained
    elements can ever express it.  Duplicates are removed first.  If the
    word search budget runs out the input is returned unchanged (a sound
    over-approximation) with a warning attribute on the result.
    """
    order = sorted(
        range(len(gs.gens)),
        key=lambda i: (gs.gens[i].degree, _canonical_key(gs.gens[i])),
    )
    kept: list[HenonMap] = []
    budget = [_MINIMAL_SEARCH_BUDGET]
    exhausted = False
    for i in order:
        H = gs.gens[i]
        if any(H.degree == K.degree and maps_equal_probabilistic(H, K) for K in kept):
            continue
        smaller = [K for K in kept if K.degree < H.degree]
        if smaller and _expressible(H, smaller, budget):
            continue
        if budget[0] <= 0:
            exhausted = True
        kept.append(H)
    if exhausted:
        out = make_generator_set(gs.gens)
        object.__setattr__(out, "reduction_incomplete", True)
        return out
    out = make_generator_set(kept)
    object.__setattr__(out, "reduction_incomplete", False)
    return out


def _canonical_key(H: HenonMap) -> tuple:
    key = []
    for f in H.factors:
        key.append((f.degree, tuple((c.real, c.imag) for c in f.coeffs), f.a.real, f.a.imag))
    return tuple(key)
