"""Pure-Python vs compiled kernel parity: same inputs, same bits out."""

import numpy as np
import pytest

from henonlab import PLUS, MINUS
from henonlab.green import packed_for
from henonlab._kernels import pure

_fast = pytest.importorskip("henonlab._kernels._fast")


@pytest.fixture(scope="module")
def pk(two_gen):
    return packed_for(two_gen, PLUS)


@pytest.fixture(scope="module")
def pkm(two_gen):
    return packed_for(two_gen, MINUS)


def _points(n, seed, half=3.0):
    rng = np.random.default_rng(seed)
    v = rng.uniform(-half, half, (n, 4))
    return [(complex(r[0], r[1]), complex(r[2], r[3])) for r in v]


def test_green_estimate_parity(pk):
    for zx, zy in _points(300, 61):
        a = pure.green_estimate_point(pk, zx, zy, 10, 24, 2**16)
        b = _fast.green_estimate_point(pk, zx, zy, 10, 24, 2**16)
        assert a == b


def test_green_estimate_parity_minus(pkm):
    for zx, zy in _points(100, 62):
        a = pure.green_estimate_point(pkm, zx, zy, 9, 20, 2**15)
        b = _fast.green_estimate_point(pkm, zx, zy, 9, 20, 2**15)
        assert a == b


def test_levels_parity(pk):
    for zx, zy in _points(40, 63):
        a = pure.green_levels_point(pk, zx, zy, 9)
        b = _fast.green_levels_point(pk, zx, zy, 9)
        assert np.array_equal(a, b)


def test_classify_parity(pk):
    for zx, zy in _points(300, 64):
        a = pure.classify_point_kernel(pk, zx, zy, 8, 2**14)
        b = _fast.classify_point_kernel(pk, zx, zy, 8, 2**14)
        assert a == b


def test_na_orbit_parity(pk):
    rng = np.random.default_rng(65)
    for zx, zy in _points(50, 66):
        idx = rng.integers(0, 2, size=20).astype(np.int64)
        a = pure.na_orbit(pk, idx, zx, zy)
        b = _fast.na_orbit(pk, idx, zx, zy)
        assert np.array_equal(a[0], b[0])
        assert np.array_equal(a[1], b[1])
        assert np.array_equal(a[2], b[2])
        assert a[3] == b[3]


def test_equidist_parity(pk):
    qy = np.zeros((1, 2), dtype=np.complex128)
    qy[0, 1] = 1.0
    qmix = np.array([[0.2, 1.0], [1.0 + 0.5j, 0.0]], dtype=np.complex128)
    for q in (qy, qmix):
        for zx, zy in _points(40, 67):
            a = pure.equidist_point(pk, q, zx, zy, 5)
            b = _fast.equidist_point(pk, q, zx, zy, 5)
            assert a == b


def test_close_subtree_parity(pk):
    import math

    for llo in (math.log(pk.R), 5.0, 30.0, 300.0):
        a = pure.close_subtree(pk, llo, llo + 1e-9, 28)
        b = _fast.close_subtree(pk, llo, llo + 1e-9, 28)
        assert a == b


def test_rows_parity(pk):
    pts = _points(64, 68)
    zx = np.array([p[0] for p in pts], dtype=np.complex128)
    zy = np.array([p[1] for p in pts], dtype=np.complex128)
    outs = []
    for impl in (pure, _fast):
        lo = np.empty(64)
        hi = np.empty(64)
        lv = np.empty(64, dtype=np.int64)
        fl = np.empty(64, dtype=np.int8)
        impl.green_estimate_rows(pk, zx, zy, 10, 24, 2**16, lo, hi, lv, fl)
        outs.append((lo, hi, lv, fl))
    for a, b in zip(*outs):
        assert np.array_equal(a, b)
