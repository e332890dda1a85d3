import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from henonlab.filtration import (
    FiltrationData,
    Region,
    conjugate_inverse_map,
    escape_radii,
    factor_bounds,
    find_filtration,
    region_of,
)
from henonlab.maps import (
    FORWARD,
    INVERSE,
    ComplexPoint,
    HenonFactor,
    eval_map,
    henon_map,
)

F1 = HenonFactor((0, 0, 1), 1)


def test_factor_bounds_example():
    m_f, M_f = factor_bounds(F1, 3.0)
    assert m_f == pytest.approx(2 / 3)
    assert M_f == pytest.approx(4 / 3)


def test_factor_bounds_infeasible():
    assert factor_bounds(F1, 1.0) is None  # m_f = 0 at R = 1


def test_factor_bounds_soundness_sampled():
    rng = np.random.default_rng(3)
    R = 3.0
    m_f, M_f = factor_bounds(F1, R)
    for mag in (R, 2 * R, 10 * R):
        for _ in range(10_000):
            py, px = rng.uniform(0, 2 * math.pi, 2)
            y = mag * complex(math.cos(py), math.sin(py))
            x = rng.uniform(0, mag) * complex(math.cos(px), math.sin(px))
            val = abs(y * y - x)
            assert m_f * mag**2 <= val <= M_f * mag**2


def test_find_filtration_single_quadratic():
    fd = find_filtration([henon_map((0, 0, 1), 1)])
    assert fd.R == 4.0  # R = 2 fails the admissibility condition
    assert 0 < fd.m < 1 < fd.M
    assert 1 < fd.R < fd.m * fd.R**fd.d0


def test_find_filtration_monotone():
    """If R is admissible then 2R passes the same certification."""
    H = henon_map((-1.1, 0, 1), 0.5)
    fd = find_filtration([H])
    for scale in (2.0, 4.0):
        R2 = fd.R * scale
        b = factor_bounds(H.factors[0], R2)
        assert b is not None
        m2 = min(b[0], 0.99)
        assert 1 < R2 < m2 * R2**fd.d0


def test_escape_radii_formula():
    fd = FiltrationData(R=3.0, m=2 / 3, M=1.5, d0=2, per_factor=(), per_generator=())
    assert escape_radii(fd, 2)[1] == pytest.approx(6.0)
    fd6 = FiltrationData(R=6.0, m=2 / 3, M=1.5, d0=2, per_factor=(), per_generator=())
    rs = escape_radii(fd6, 3)
    assert rs[1] == pytest.approx(24.0)
    assert rs[2] == pytest.approx(384.0)


def test_escape_radii_increasing_and_inf():
    fd = find_filtration([henon_map((0, 0, 1), 1)])
    rs = escape_radii(fd, 12)
    assert all(b > a for a, b in zip(rs, rs[1:]) if not math.isinf(b))
    assert math.isinf(escape_radii(fd, 40)[-1])


def test_region_of_examples():
    assert region_of(ComplexPoint(0, 10), 3) is Region.V_PLUS
    assert region_of(ComplexPoint(10, 0), 3) is Region.V_MINUS
    assert region_of(ComplexPoint(1, 1), 3) is Region.BIDISK


@given(
    ax=st.floats(0, 20),
    ay=st.floats(0, 20),
    R=st.floats(0.5, 8),
)
@settings(max_examples=200, deadline=None)
def test_region_total_and_tie(ax, ay, R):
    z = ComplexPoint(complex(ax, 0), complex(0, ay))
    r = region_of(z, R)
    if ay >= ax and ay >= R:
        assert r is Region.V_PLUS
    elif ax >= ay and ax >= R:
        assert r is Region.V_MINUS
    else:
        assert r is Region.BIDISK


def test_forward_invariance_sampled(two_gen):
    fd = two_gen.filtration
    rng = np.random.default_rng(4)
    for _ in range(10_000):
        mag = fd.R * math.exp(rng.uniform(0, math.log(1000)))
        py, px = rng.uniform(0, 2 * math.pi, 2)
        z = ComplexPoint(
            rng.uniform(0, mag) * complex(math.cos(px), math.sin(px)),
            mag * complex(math.cos(py), math.sin(py)),
        )
        for H in two_gen.gens:
            assert region_of(eval_map(H, z, FORWARD), fd.R) is Region.V_PLUS
            zm = ComplexPoint(z.y, z.x)  # mirror point of V_R^-
            assert region_of(eval_map(H, zm, INVERSE), fd.R) is Region.V_MINUS


def test_escape_growth_along_words(two_gen):
    fd = two_gen.filtration
    radii = escape_radii(fd, 6)
    rng = np.random.default_rng(5)
    from henonlab.semigroup import words, eval_word
    from henonlab.maps import sup_norm

    for _ in range(20):
        mag = fd.R * (1 + rng.random())
        z = ComplexPoint(rng.uniform(0, mag), mag)
        for k in (1, 3, 6):
            for w in words(two_gen, k):
                assert sup_norm(eval_word(two_gen, w, z, FORWARD)) >= radii[k - 1]


def test_growth_bounds_sampled(two_gen):
    """Composite (m, M) brackets |pi_2 H_i| / |y|^d_i on sampled wedge points."""
    fd = two_gen.filtration
    rng = np.random.default_rng(6)
    for _ in range(2000):
        mag = fd.R * math.exp(rng.uniform(0, math.log(50)))
        py, px = rng.uniform(0, 2 * math.pi, 2)
        z = ComplexPoint(
            rng.uniform(0, mag) * complex(math.cos(px), math.sin(px)),
            mag * complex(math.cos(py), math.sin(py)),
        )
        for H in two_gen.gens:
            img = eval_map(H, z, FORWARD)
            ratio = abs(img.y) / mag**H.degree
            assert fd.m < ratio < fd.M


def test_conjugate_inverse_identity():
    """swap o H^-1 o swap equals the conjugated factor composition."""
    H = henon_map((-1.1, 0.3j, 1), 0.5)
    G = conjugate_inverse_map(H)
    rng = np.random.default_rng(7)
    for _ in range(50):
        v = rng.uniform(-3, 3, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        lhs = eval_map(H, ComplexPoint(z.y, z.x), INVERSE)
        rhs = eval_map(G, z, FORWARD)
        assert abs(lhs.x - rhs.y) < 1e-12 * (1 + abs(lhs.x))
        assert abs(lhs.y - rhs.x) < 1e-12 * (1 + abs(lhs.y))
