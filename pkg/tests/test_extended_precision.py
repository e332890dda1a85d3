"""Extended-precision oracles: 60-digit orbits vs certified intervals.

mpmath can follow orbits far past double range, giving a truly
independent check of the log-space handoff and the closure bounds.
"""

import math

import mpmath
import numpy as np
import pytest

from henonlab import MINUS, PLUS
from henonlab.green import SequenceSpec, green_estimate, na_levels, packed_for
from henonlab.maps import ComplexPoint, henon_map
from henonlab.semigroup import make_generator_set


def _mp_apply(H, x, y):
    for f in reversed(H.factors):
        acc = mpmath.mpc(0)
        for c in reversed(f.coeffs):
            acc = acc * y + mpmath.mpc(c)
        x, y = y, acc - mpmath.mpc(f.a) * x
    return x, y


def _mp_green(H, z, n):
    with mpmath.workdps(60):
        x, y = mpmath.mpc(z[0]), mpmath.mpc(z[1])
        for _ in range(n):
            x, y = _mp_apply(H, x, y)
        nrm = max(abs(x), abs(y))
        if nrm <= 1:
            return 0.0
        return float(mpmath.log(nrm) / H.degree**n)


@pytest.mark.parametrize(
    "coeffs,a",
    [
        ((0, 0, 1), 1),
        ((-1.1, 0, 1), 0.5),
        ((0.3 - 0.2j, 0.1j, 0.8 + 0.4j), -0.7 + 0.2j),
    ],
)
def test_certified_interval_contains_mp_value(coeffs, a):
    H = henon_map(coeffs, a)
    gs = make_generator_set([H])
    R = gs.filtration.R
    rng = np.random.default_rng(81)
    for _ in range(12):
        mag = R * (1 + 3 * rng.random())
        z = ComplexPoint(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)), mag)
        est = green_estimate(gs, z, PLUS, max_depth=22, tail_depth=34)
        ref = _mp_green(H, z, 28)
        # the n=28 truncation of the limit sits within the Cauchy tail
        pk = packed_for(gs, PLUS)
        trunc = pk.M0 * 0.5**28 / 0.5
        assert est.lo - trunc - 1e-9 <= ref <= est.hi + trunc + 1e-9


def test_na_values_match_mp_orbit(attracting_pair):
    """Mid-chain switching through two-factor generators tracks the true orbit."""
    gs = attracting_pair
    seq = SequenceSpec.seeded(123, 18)
    idx = seq.materialize(gs.n0)
    rng = np.random.default_rng(82)
    R = gs.filtration.R
    for _ in range(8):
        z = ComplexPoint(complex(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                         R * (1.5 + rng.random()))
        lo, hi, entered = na_levels(gs, seq, z, 18)
        assert entered == 0
        with mpmath.workdps(60):
            x, y = mpmath.mpc(z[0]), mpmath.mpc(z[1])
            dcur = 1.0
            for s in range(1, 19):
                H = gs.gens[idx[s - 1] - 1]
                x, y = _mp_apply(H, x, y)
                dcur *= H.degree
                ref = float(mpmath.log(max(abs(x), abs(y)))) / dcur
                assert lo[s] - 1e-9 <= ref <= hi[s] + 1e-9


def test_asymptotic_band_brackets_mp_orbit(two_gen):
    """Drive one orbit deep past double range; the certified band must hold."""
    from henonlab._kernels import apply_generator

    pk = packed_for(two_gen, PLUS)
    z = ComplexPoint(0.5 + 0.25j, 9.0 - 2.0j)
    schedule = [0, 1, 0, 0, 1, 1, 0, 1, 0, 0]
    mode, x, y, llo, lhi = 0, complex(z[0]), complex(z[1]), 0.0, 0.0
    with mpmath.workdps(80):
        mx, my = mpmath.mpc(z[0]), mpmath.mpc(z[1])
        saw_asymptotic = False
        for gi in schedule:
            if mode == 0:
                mode, x, y, llo, lhi = apply_generator(pk, gi, x, y)
            else:
                from henonlab._kernels import pure

                mode, x, y, llo, lhi = pure._apply_generator_asymptotic(pk, gi, llo, lhi)
            mx, my = _mp_apply(two_gen.gens[gi], mx, my)
            if mode == 1:
                saw_asymptotic = True
                true_log = float(mpmath.log(abs(my)))
                assert llo - 1e-9 <= true_log <= lhi + 1e-9
    assert saw_asymptotic
