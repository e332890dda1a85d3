import math

import numpy as np
import pytest

from henonlab import MINUS, PLUS
from henonlab.green import (
    GreenEstimate,
    SequenceSpec,
    check_semi_invariance,
    green_estimate,
    green_k,
    green_levels,
    green_tilde_k,
    na_green,
    na_levels,
    packed_for,
    single_map_green,
)
from henonlab.maps import ComplexPoint, henon_map
from henonlab.semigroup import BudgetError, make_generator_set


def _wedge_point(rng, R, hi=1e3):
    mag = math.exp(rng.uniform(math.log(R), math.log(hi)))
    py, px = rng.uniform(0, 2 * math.pi, 2)
    return ComplexPoint(
        rng.uniform(0, mag) * complex(math.cos(px), math.sin(px)),
        mag * complex(math.cos(py), math.sin(py)),
    )


def test_green_k_single_gen_level1():
    gs = make_generator_set([henon_map((0, 0, 1), 1)])
    val = green_k(gs, ComplexPoint(0, 1e6), 1)
    assert val == pytest.approx(math.log(1e12) / 2, rel=1e-12)


def test_green_k_fixed_point_zero():
    gs = make_generator_set([henon_map((0, 0, 1), 1)])
    for k in range(1, 8):
        assert green_k(gs, ComplexPoint(0, 0), k) == 0.0


def test_green_levels_budget(three_gen):
    with pytest.raises(BudgetError):
        green_levels(three_gen, ComplexPoint(0, 0), 20)


def test_cauchy_rate(two_gen):
    fd = two_gen.filtration
    rng = np.random.default_rng(21)
    for _ in range(30):
        z = _wedge_point(rng, fd.R)
        lv = green_levels(two_gen, z, 11)
        for k in range(1, 11):
            assert abs(lv[k + 1] - lv[k]) <= 0.5 ** (k + 1) * fd.M0 + 1e-9


def test_estimate_contains_oracle(two_gen):
    H1 = two_gen.gens[0]
    gs1 = make_generator_set([H1])
    rng = np.random.default_rng(22)
    for _ in range(50):
        z = _wedge_point(rng, gs1.filtration.R, 1e5)
        est = green_estimate(gs1, z, PLUS, max_depth=20, tail_depth=30)
        oracle = single_map_green(H1, z, 40)
        assert est.lo - 1e-6 <= oracle <= est.hi + 1e-6


def test_estimate_fixed_point_bounded(two_gen):
    gs = make_generator_set([henon_map((0, 0, 1), 1)])
    est = green_estimate(gs, ComplexPoint(0, 0), PLUS, max_depth=14)
    pk = packed_for(gs, PLUS)
    assert est.lo == 0.0
    assert est.hi <= (gs.n0 / gs.D) ** 14 * (pk.log_B + pk.lift) + 1e-9


def test_estimate_width_monotone_in_depth(two_gen):
    rng = np.random.default_rng(23)
    for _ in range(25):
        v = rng.uniform(-2, 2, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        w1 = green_estimate(two_gen, z, PLUS, max_depth=8, tail_depth=24).width
        w2 = green_estimate(two_gen, z, PLUS, max_depth=10, tail_depth=24).width
        assert w2 <= w1 + 1e-9


def test_intervals_nested_under_refinement(two_gen):
    rng = np.random.default_rng(24)
    for _ in range(50):
        v = rng.uniform(-2.5, 2.5, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        a = green_estimate(two_gen, z, PLUS, max_depth=9, tail_depth=22)
        b = green_estimate(two_gen, z, PLUS, max_depth=11, tail_depth=26)
        assert a.lo - 1e-9 <= b.lo and b.hi <= a.hi + 1e-9


def test_log_growth_band(two_gen):
    fd = two_gen.filtration
    q = two_gen.n0 / two_gen.D
    band = fd.M0 * q / (1 - q)
    rng = np.random.default_rng(25)
    for _ in range(40):
        z = _wedge_point(rng, fd.R, 1e6)
        est = green_estimate(two_gen, z, PLUS, max_depth=10, tail_depth=26)
        assert abs(est.mid - math.log(abs(z.y))) <= band + est.width
        zm = ComplexPoint(z.y, z.x)
        estm = green_estimate(two_gen, zm, MINUS, max_depth=10, tail_depth=26)
        assert abs(estm.mid - math.log(abs(zm.x))) <= band + estm.width


def test_positivity_certificate(two_gen):
    from henonlab.classify import Verdict, classify_point

    rng = np.random.default_rng(26)
    found = 0
    for _ in range(60):
        v = rng.uniform(-2, 2, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        cls = classify_point(two_gen, z, PLUS, depth=10)
        if cls.verdict in (Verdict.ESCAPING_WEAK, Verdict.ESCAPING_STRONG):
            est = green_estimate(two_gen, z, PLUS, max_depth=13, tail_depth=26)
            assert est.lo >= 0.0
            if est.lo > 0:
                found += 1
    assert found >= 10


def test_semi_invariance(two_gen):
    rng = np.random.default_rng(27)
    for _ in range(30):
        v = rng.uniform(-2.5, 2.5, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        res = check_semi_invariance(two_gen, z, PLUS, max_depth=10, tail_depth=24,
                                    node_budget=2**17)
        assert res.contains_zero()
        assert abs(res.mid) <= 2 * res.summed_width + 1e-12


def test_semi_invariance_single_gen_functoriality():
    H = henon_map((0, 0, 1), 1)
    gs = make_generator_set([H])
    rng = np.random.default_rng(28)
    for _ in range(20):
        z = _wedge_point(rng, gs.filtration.R, 100)
        res = check_semi_invariance(gs, z, PLUS, max_depth=16, tail_depth=28)
        assert res.contains_zero()


def test_semi_invariance_residual_shrinks(two_gen):
    rng = np.random.default_rng(29)
    z = _wedge_point(rng, two_gen.filtration.R, 50)
    widths = []
    for tail in (8, 12, 16, 20):
        res = check_semi_invariance(two_gen, z, PLUS, max_depth=8, tail_depth=tail)
        widths.append(res.hi - res.lo)
    assert widths[-1] < widths[0]
    for a, b in zip(widths, widths[1:]):
        assert b <= a * 0.6  # roughly halving per +4 tail


def test_single_map_green_iterates():
    H = henon_map((0, 0, 1), 1)
    z = ComplexPoint(0, 4.0)
    # direct magnitudes: (0,4) -> (4,16) -> (16,252)
    assert single_map_green(H, z, 1) == pytest.approx(math.log(16) / 2)
    assert single_map_green(H, z, 2) == pytest.approx(math.log(252) / 4)
    deep = single_map_green(H, z, 40)
    assert deep == pytest.approx(1.3835, abs=2e-3)


def test_single_map_green_functoriality():
    from henonlab.maps import FORWARD, eval_map

    H = henon_map((-1.1, 0, 1), 0.5)
    rng = np.random.default_rng(30)
    gs = make_generator_set([H])
    for _ in range(20):
        z = _wedge_point(rng, gs.filtration.R, 1e4)
        g = single_map_green(H, z, 40)
        gh = single_map_green(H, eval_map(H, z, FORWARD), 40)
        assert abs(gh - 2 * g) <= 1e-6


def test_green_tilde_matches_single_gen():
    H = henon_map((0, 0, 1), 1)
    gs = make_generator_set([H])
    z = ComplexPoint(0.2, 7.0)
    assert green_tilde_k(gs, z, 1, PLUS, inner_n=30) == pytest.approx(
        single_map_green(H, z, 30), rel=1e-9
    )


def test_green_tilde_approaches_levels(two_gen):
    rng = np.random.default_rng(31)
    gaps = {2: 0.0, 4: 0.0, 6: 0.0}
    for _ in range(10):
        z = _wedge_point(rng, two_gen.filtration.R, 100)
        lv = green_levels(two_gen, z, 6)
        for k in gaps:
            gt = green_tilde_k(two_gen, z, k, PLUS, inner_n=24)
            gaps[k] = max(gaps[k], abs(gt - lv[k]))
    assert gaps[6] <= gaps[2] + 1e-9
    assert gaps[6] < 0.05


def test_na_green_constant_sequence_matches_oracle(two_gen):
    H1 = two_gen.gens[0]
    gs1 = make_generator_set([H1])
    seq = SequenceSpec.explicit([1] * 30)
    rng = np.random.default_rng(32)
    for _ in range(20):
        z = _wedge_point(rng, gs1.filtration.R, 1e4)
        est = na_green(gs1, seq, z, 25)
        oracle = single_map_green(H1, z, 40)
        assert est.lo - 1e-6 <= oracle <= est.hi + 1e-6


def test_na_green_bounded_orbit_shrinks(attracting_pair):
    seq = SequenceSpec.seeded(9, 64)
    z = ComplexPoint(0.02, 0.03)
    prev = math.inf
    for k in (4, 8, 16, 32):
        est = na_green(attracting_pair, seq, z, k)
        assert est.lo == 0.0
        assert est.hi <= prev + 1e-15
        prev = est.hi
    assert prev < 1e-6


def test_na_tail_rate(two_gen):
    pk = packed_for(two_gen, PLUS)
    mt = pk.M_tilde
    rng = np.random.default_rng(33)
    seq = SequenceSpec.seeded(17, 30)
    checked = 0
    for _ in range(25):
        z = _wedge_point(rng, two_gen.filtration.R, 1e3)
        lo, hi, entered = na_levels(two_gen, seq, z, 24)
        mid = 0.5 * (lo + hi)
        assert entered == 0
        for k in range(1, 24):
            assert abs(mid[k + 1] - mid[k]) <= mt * 0.5 ** (k + 1) + 1e-9
            checked += 1
    assert checked > 0


def test_sequence_spec_validation(two_gen):
    with pytest.raises(ValueError):
        SequenceSpec.explicit([1, 3]).materialize(2)
    assert len(SequenceSpec.seeded(1, 16).materialize(2)) == 16
    with pytest.raises(ValueError):
        SequenceSpec.seeded(1, 4).materialize(2, 8)
    a = SequenceSpec.seeded(1, 16).materialize(2)
    b = SequenceSpec.seeded(1, 16).materialize(2)
    assert a == b


def test_green_estimate_validates():
    with pytest.raises(ValueError):
        GreenEstimate(lo=1.0, hi=0.5, leaves=1, depth=1)


def test_estimate_budget_flagged(two_gen):
    # deep inside the bounded region a tiny node budget must flag the result
    est = green_estimate(two_gen, ComplexPoint(0.0, 0.0), PLUS,
                         max_depth=14, tail_depth=20, node_budget=32)
    assert est.flagged
    # and the flagged interval is still sound (wider, containing the tight one)
    tight = green_estimate(two_gen, ComplexPoint(0.0, 0.0), PLUS,
                           max_depth=14, tail_depth=20)
    assert est.lo - 1e-12 <= tight.lo and tight.hi <= est.hi + 1e-12


def test_estimate_width_bound_single_point():
    gs = make_generator_set([henon_map((0, 0, 1), 1)])
    fd = gs.filtration
    for tail in (8, 12, 16):
        est = green_estimate(gs, ComplexPoint(0, 1e6), PLUS,
                             max_depth=12, tail_depth=tail)
        assert est.width <= fd.M0 * 2.0 ** (-tail) + 1e-7


def test_single_map_green_fixed_point_zero():
    H = henon_map((0, 0, 1), 1)
    assert single_map_green(H, ComplexPoint(0, 0), 30) == 0.0


def test_green_tilde_zero_on_shared_bounded_point(attracting_pair):
    # the origin stays bounded under every word, so every term vanishes
    assert green_tilde_k(attracting_pair, ComplexPoint(0, 0), 3, PLUS, inner_n=16) == 0.0


def test_intervals_nested_random_generator_sets():
    """Refined intervals stay inside shallower ones across random scenes."""
    rng = np.random.default_rng(71)
    checked = 0
    for _ in range(10):
        maps = []
        for _ in range(2):
            c0 = complex(*rng.uniform(-1.2, 1.2, 2))
            c1 = complex(*rng.uniform(-0.5, 0.5, 2))
            a = complex(*rng.uniform(-1.0, 1.0, 2))
            if abs(a) < 0.1:
                a += 0.3
            maps.append(henon_map((c0, c1, 1), a))
        gs = make_generator_set(maps)
        for _ in range(20):
            v = rng.uniform(-2.5, 2.5, 4)
            z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
            a_est = green_estimate(gs, z, PLUS, max_depth=9, tail_depth=20,
                                   node_budget=2**16)
            b_est = green_estimate(gs, z, PLUS, max_depth=11, tail_depth=24,
                                   node_budget=2**18)
            assert a_est.lo - 1e-9 <= b_est.lo
            assert b_est.hi <= a_est.hi + 1e-9
            checked += 1
    assert checked == 200


def test_extreme_roots_handled(two_gen):
    """Roots far outside the bidisk in either wedge evaluate soundly."""
    for z in (ComplexPoint(1e9, 1.0), ComplexPoint(1.0, 1e9),
              ComplexPoint(1e9, 1e8), ComplexPoint(-2e13, 1e13j)):
        est = green_estimate(two_gen, z, PLUS, max_depth=10, tail_depth=24)
        assert est.hi >= est.lo >= 0
        assert est.hi > 1.0  # escaping for sure
        estm = green_estimate(two_gen, z, MINUS, max_depth=10, tail_depth=24)
        assert estm.hi >= estm.lo >= 0


def test_closure_agrees_with_exact_level_sums(two_gen, three_gen):
    """Independent bracket check for the multi-generator closure path.

    On wedge points the exact level sum G_k brackets the limit within the
    geometric Cauchy tail, so the certified interval and the G_k-derived
    interval must overlap.
    """
    rng = np.random.default_rng(72)
    for gs in (two_gen, three_gen):
        fd = gs.filtration
        q = gs.n0 / gs.D
        kmax = 12 if gs.n0 == 2 else 9
        tail_from_k = fd.M0 * q ** (kmax + 1) / (1 - q)
        for _ in range(40):
            z = _wedge_point(rng, fd.R, 1e4)
            est = green_estimate(gs, z, PLUS, max_depth=10, tail_depth=30)
            gk = green_levels(gs, z, kmax)[kmax]
            assert abs(est.mid - gk) <= 0.5 * est.width + tail_from_k + 1e-9


def test_oracle_agreement_minus_direction(two_gen):
    H2 = two_gen.gens[1]
    gs1 = make_generator_set([H2])
    rng = np.random.default_rng(73)
    for _ in range(40):
        zp = _wedge_point(rng, gs1.filtration.R, 1e5)
        z = ComplexPoint(zp.y, zp.x)  # a V_R^- point
        est = green_estimate(gs1, z, MINUS, max_depth=20, tail_depth=30)
        oracle = single_map_green(H2, z, 40, MINUS)
        assert est.lo - 1e-6 <= oracle <= est.hi + 1e-6


def test_closure_monotone_properties(two_gen):
    import math as _math

    from henonlab._kernels import close_subtree

    pk = packed_for(two_gen, PLUS)
    base = _math.log(pk.R) + 0.7
    ref = close_subtree(pk, base, base + 1e-9, 24)
    # widening the input magnitude band widens the output, containing ref
    wide = close_subtree(pk, base - 0.1, base + 0.1, 24)
    assert wide[0] - 1e-12 <= ref[0] and ref[1] <= wide[1] + 1e-12
    # more tail levels never widen
    for t in (4, 8, 16, 32):
        cur = close_subtree(pk, base, base + 1e-9, t)
        assert cur[0] - 1e-12 <= ref[0] and ref[1] <= cur[1] + 1e-12 or t >= 24
    w_prev = None
    for t in (4, 8, 16, 32):
        lo, hi = close_subtree(pk, base, base + 1e-9, t)
        if w_prev is not None:
            assert hi - lo <= w_prev + 1e-12
        w_prev = hi - lo
