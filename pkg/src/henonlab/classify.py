"""Certified classification against the strong/weak escaping sets.

Escape through the wedge is a positive certificate (forward invariance
closes the whole subtree); boundedness is only ever certified up to the
explored depth, mirroring the for-all-infinite-words structure of the
filled sets.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from ._kernels import MINUS, PLUS
from .green import packed_for, _oriented
from .maps import ComplexPoint
from .semigroup import GeneratorSet, Word
from .slices import SliceSpec

__all__ = ["Verdict", "Classification", "ClassificationGrid", "classify_point", "classify_grid"]

DEFAULT_NODE_BUDGET = 2**20


class Verdict(enum.Enum):
    ESCAPING_STRONG = _kernels.VERDICT_STRONG
    ESCAPING_WEAK = _kernels.VERDICT_WEAK
    BOUNDED_TO_DEPTH = _kernels.VERDICT_BOUNDED
    UNDETERMINED = _kernels.VERDICT_UNDETERMINED


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    cert_depth: int
    witness: Optional[Word]


def classify_point(
    gs: GeneratorSet,
    z: ComplexPoint,
    sign: int = PLUS,
    depth: int = 10,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Classification:
    """Strongest certified verdict for z within the given word depth.

    ESCAPING_STRONG: every word of length cert_depth lands in the escape
    wedge.  ESCAPING_WEAK: the witness word does.  BOUNDED_TO_DEPTH: no
    word within depth escapes (no claim beyond).  UNDETERMINED: budget ran
    out first.
    """
    if not (1 <= depth <= 60):
        raise ValueError("depth out of range 1..60")
    if node_budget < 1:
        raise ValueError("node_budget must be positive")
    pk = packed_for(gs, sign)
    zx, zy = _oriented(z, sign)
    code, cert, wit = _kernels.classify_point_kernel(pk, zx, zy, depth, node_budget)
    word = None
    if wit:
        # kernel paths are in application order; words are outermost-first
        d = 1
        for i in wit:
            d *= gs.gens[i - 1].degree
        word = Word(indices=tuple(reversed(wit)), degree=d)
    return Classification(verdict=Verdict(code), cert_depth=cert, witness=word)


@dataclass(frozen=True)
class ClassificationGrid:
    spec: SliceSpec
    verdicts: np.ndarray     # int8 (ny, nx), Verdict values
    cert_depths: np.ndarray  # int32 (ny, nx)

    def count(self, verdict: Verdict) -> int:
        return int((self.verdicts == verdict.value).sum())


def classify_grid(
    gs: GeneratorSet,
    spec: SliceSpec,
    sign: int = PLUS,
    depth: int = 10,
    node_budget: int = DEFAULT_NODE_BUDGET,
    threads: int = 1,
) -> ClassificationGrid:
    """Per-pixel classification, row-parallel and thread-count independent."""
    pk = packed_for(gs, sign)
    verdicts = np.empty((spec.ny, spec.nx), dtype=np.int8)
    certs = np.empty((spec.ny, spec.nx), dtype=np.int32)

    def fill_row(iy: int) -> None:
        zx, zy = spec.row_points(iy)
        if sign == MINUS:
            zx, zy = zy, zx
        v = np.empty(spec.nx, dtype=np.int8)
        c = np.empty(spec.nx, dtype=np.int32)
        _kernels.classify_rows(pk, zx, zy, depth, node_budget, v, c)
        verdicts[iy] = v
        certs[iy] = c

    if threads <= 1:
        for iy in spec.rows():
            fill_row(iy)
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(fill_row, spec.rows()))
    return ClassificationGrid(spec=spec, verdicts=verdicts, cert_depths=certs)
