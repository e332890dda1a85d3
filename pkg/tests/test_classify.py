import numpy as np

from henonlab import PLUS
from henonlab.classify import Verdict, classify_grid, classify_point
from henonlab.filtration import Region, region_of
from henonlab.green import green_estimate, packed_for
from henonlab.maps import ComplexPoint, henon_map
from henonlab.semigroup import eval_word, make_generator_set
from henonlab.slices import vertical_line


def test_root_in_wedge_is_strong(two_gen):
    cls = classify_point(two_gen, ComplexPoint(0, 1e6), PLUS, depth=4)
    assert cls.verdict is Verdict.ESCAPING_STRONG
    assert cls.cert_depth == 0


def test_fixed_point_bounded():
    gs = make_generator_set([henon_map((0, 0, 1), 1)])
    cls = classify_point(gs, ComplexPoint(0, 0), PLUS, depth=10)
    assert cls.verdict is Verdict.BOUNDED_TO_DEPTH
    assert cls.cert_depth == 10


def test_weak_witness_replays(two_gen):
    rng = np.random.default_rng(41)
    R = two_gen.filtration.R
    found = 0
    for _ in range(200):
        v = rng.uniform(-2, 2, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        cls = classify_point(two_gen, z, PLUS, depth=8)
        if cls.verdict is Verdict.ESCAPING_WEAK:
            found += 1
            assert cls.witness is not None
            img = eval_word(two_gen, cls.witness, z)
            assert region_of(img, R) is Region.V_PLUS
            # extending a witness by any generator keeps it valid
            from henonlab.semigroup import Word

            ext = Word((1,) + cls.witness.indices, 2 * cls.witness.degree)
            assert region_of(eval_word(two_gen, ext, z), R) is Region.V_PLUS
    assert found >= 5


def test_strong_monotone_in_depth(two_gen):
    rng = np.random.default_rng(42)
    for _ in range(150):
        v = rng.uniform(-2.5, 2.5, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        a = classify_point(two_gen, z, PLUS, depth=6)
        if a.verdict is Verdict.ESCAPING_STRONG:
            b = classify_point(two_gen, z, PLUS, depth=7)
            assert b.verdict is Verdict.ESCAPING_STRONG
            assert b.cert_depth <= 7


def test_budget_returns_undetermined(three_gen):
    cls = classify_point(three_gen, ComplexPoint(0.01, 0.02), PLUS, depth=12,
                         node_budget=50)
    assert cls.verdict in (Verdict.UNDETERMINED, Verdict.ESCAPING_WEAK)


def test_consistency_with_green(two_gen):
    rng = np.random.default_rng(43)
    pk = packed_for(two_gen, PLUS)
    for _ in range(80):
        v = rng.uniform(-2, 2, 4)
        z = ComplexPoint(complex(v[0], v[1]), complex(v[2], v[3]))
        cls = classify_point(two_gen, z, PLUS, depth=10)
        est = green_estimate(two_gen, z, PLUS, max_depth=14, tail_depth=26,
                             node_budget=2**18)
        if cls.verdict is Verdict.ESCAPING_STRONG:
            assert est.lo > 0
        if cls.verdict is Verdict.BOUNDED_TO_DEPTH:
            bound = (two_gen.n0 / two_gen.D) ** 10 * (pk.log_B + pk.lift) + 1e-6
            assert est.hi <= bound


def test_containment_outside_filtration(two_gen):
    """Points outside V_R u V_R^- cannot stay bounded past depth 1."""
    rng = np.random.default_rng(44)
    R = two_gen.filtration.R
    for _ in range(100):
        mag = R * (1 + 3 * rng.random())
        z = ComplexPoint(rng.uniform(0, mag), mag)  # wedge point
        cls = classify_point(two_gen, z, PLUS, depth=6)
        assert cls.verdict is Verdict.ESCAPING_STRONG


def test_grid_counts_and_determinism(two_gen):
    R = two_gen.filtration.R
    spec = vertical_line(0.1, (-(R + 1), -(R + 1), R + 1, R + 1), 48, 48)
    g1 = classify_grid(two_gen, spec, PLUS, depth=6, threads=1)
    g4 = classify_grid(two_gen, spec, PLUS, depth=6, threads=4)
    assert np.array_equal(g1.verdicts, g4.verdicts)
    assert np.array_equal(g1.cert_depths, g4.cert_depths)
    assert g1.count(Verdict.ESCAPING_STRONG) > 0


def test_grid_all_strong_inside_wedge(two_gen):
    R = two_gen.filtration.R
    spec = vertical_line(0.0, (-1.0, 3 * R, 1.0, 4 * R), 16, 16)
    grid = classify_grid(two_gen, spec, PLUS, depth=2)
    assert (grid.verdicts == Verdict.ESCAPING_STRONG.value).all()


def test_certified_region_grows_with_depth(two_gen):
    R = two_gen.filtration.R
    spec = vertical_line(0.1, (-(R + 1), -(R + 1), R + 1, R + 1), 64, 64)
    shallow = classify_grid(two_gen, spec, PLUS, depth=4)
    deep = classify_grid(two_gen, spec, PLUS, depth=8)
    s_mask = shallow.verdicts == Verdict.ESCAPING_STRONG.value
    d_mask = deep.verdicts == Verdict.ESCAPING_STRONG.value
    assert (d_mask | ~s_mask).all()  # shallow-certified stays certified
    assert d_mask.sum() > s_mask.sum()
