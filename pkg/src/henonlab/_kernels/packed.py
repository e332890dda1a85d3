"""Flat array form of a generator set, one per dynamical direction.

The kernels never touch the object model: a generator set is packed into
numpy arrays (factor coefficients, degrees, offsets) plus certified
scalar constants.  The backward dynamics reuse the forward kernels via
the coordinate swap (x,y) -> (y,x): the swapped inverse of a Henon factor
is again a Henon factor with polynomial p/a and parameter 1/a, and V_R^-
becomes V_R^+.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..filtration import conjugate_inverse_map
from ..maps import HenonMap

__all__ = ["PackedGenerators", "pack", "PLUS", "MINUS"]

PLUS = 1
MINUS = -1

# Kernel-side exact->asymptotic switch.  Much higher than the public
# log_step default: at 1e12 the relative slack of the growth bounds is
# ~1e-12, which keeps certified intervals (and the structural jumps they
# cause across a rendered grid) far below every test tolerance.
KERNEL_SWITCH = 1e12

# Absolute padding applied when an exact magnitude is converted to a log
# interval; covers double rounding of log/abs.
LOG_PAD = 1e-12


@dataclass
class PackedGenerators:
    n_gens: int
    D: int
    q: float                    # n_gens / D
    d_min: int
    d_max: int
    gen_deg: np.ndarray         # int64[n_gens]
    gen_off: np.ndarray         # int64[n_gens+1], factor slices, application order
    fac_deg: np.ndarray         # int64[F]
    fac_a: np.ndarray           # complex128[F]
    fac_abs_a: np.ndarray       # float64[F]
    fac_coeffs: np.ndarray      # complex128 flat, c_0..c_d per factor
    fac_coeff_off: np.ndarray   # int64[F+1]
    fac_abs_coeffs: np.ndarray  # float64 flat
    R: float
    log_R: float
    log_m: float                # composite, clamped into (log m < 0 < log M)
    log_M: float
    M0: float                   # max(|log m|, |log M|)
    log_B: float                # upper bound for sup ||H_i|| on the (R+1)-bidisk
    lift: float                 # L with G(w) <= log+||w|| + L everywhere
    gen_log_m: np.ndarray = field(default=None)  # per-generator global bounds at R
    gen_log_M: np.ndarray = field(default=None)
    fac_ylim: np.ndarray = field(default=None)  # exact-eval magnitude guards
    fac_xlim: np.ndarray = field(default=None)
    switch_mag: float = KERNEL_SWITCH
    Dinv_pow: np.ndarray = field(default=None)  # D^-k, k = 0..64

    def __post_init__(self) -> None:
        if self.Dinv_pow is None:
            self.Dinv_pow = np.array(
                [float(self.D) ** (-k) for k in range(65)], dtype=np.float64
            )

    @property
    def M_tilde(self) -> float:
        """max(M0, |log B|), the non-autonomous tail constant."""
        return max(self.M0, abs(self.log_B))


def _pack_direction(maps: list[HenonMap], fd) -> PackedGenerators:
    n = len(maps)
    gen_deg = np.array([H.degree for H in maps], dtype=np.int64)
    D = int(gen_deg.sum())

    fac_deg: list[int] = []
    fac_a: list[complex] = []
    coeffs: list[complex] = []
    coeff_off = [0]
    gen_off = [0]
    for H in maps:
        for f in reversed(H.factors):  # application order: innermost first
            fac_deg.append(f.degree)
            fac_a.append(f.a)
            coeffs.extend(f.coeffs)
            coeff_off.append(len(coeffs))
        gen_off.append(len(fac_deg))

    abs_coeffs = np.abs(np.array(coeffs, dtype=np.complex128)).astype(np.float64)
    abs_a = np.abs(np.array(fac_a, dtype=np.complex128)).astype(np.float64)

    # Exact-evaluation guards: keep |p(y)| and |a*x| below ~1e290.
    n_fac = len(fac_deg)
    ylim = np.empty(n_fac, dtype=np.float64)
    xlim = np.empty(n_fac, dtype=np.float64)
    for j in range(n_fac):
        lo_c, hi_c = coeff_off[j], coeff_off[j + 1]
        coefsum = float(abs_coeffs[lo_c:hi_c].sum())
        ylim[j] = (1e290 / (coefsum + 1.0)) ** (1.0 / fac_deg[j])
        xlim[j] = 1e290 / (abs_a[j] + 1.0)

    # Per-generator two-sided growth constants at R, chained through factors.
    g_log_m = np.empty(n, dtype=np.float64)
    g_log_M = np.empty(n, dtype=np.float64)
    for gi in range(n):
        lo = hi = 0.0
        for j in range(gen_off[gi], gen_off[gi + 1]):
            d = fac_deg[j]
            o = coeff_off[j]
            lead = abs_coeffs[o + d]
            slack = (
                sum(abs_coeffs[o + i] * fd.R ** (i - d) for i in range(d))
                + abs_a[j] * fd.R ** (1 - d)
            ) / lead
            lo = d * lo + math.log(lead) + math.log1p(-slack)
            hi = d * hi + math.log(lead) + math.log1p(slack)
        g_log_m[gi] = lo
        g_log_M[gi] = hi

    # B: chained coefficient bound for sup ||H_i|| on the (R+1)-bidisk.
    log_B = 0.0
    lift = 0.0
    for H in maps:
        cur = fd.R + 1.0
        carry = 0.0
        for f in reversed(H.factors):
            s = sum(abs(c) for c in f.coeffs)
            grow = sum(abs(c) * cur**j for j, c in enumerate(f.coeffs)) + abs(f.a) * cur
            cur = max(cur, grow)
            carry = f.degree * carry + math.log(s + abs(f.a) + 1.0)
        log_B = max(log_B, math.log(cur))
        lift = max(lift, carry)

    return PackedGenerators(
        n_gens=n,
        D=D,
        q=n / D,
        d_min=int(gen_deg.min()),
        d_max=int(gen_deg.max()),
        gen_deg=gen_deg,
        gen_off=np.array(gen_off, dtype=np.int64),
        fac_deg=np.array(fac_deg, dtype=np.int64),
        fac_a=np.array(fac_a, dtype=np.complex128),
        fac_abs_a=abs_a,
        fac_coeffs=np.array(coeffs, dtype=np.complex128),
        fac_coeff_off=np.array(coeff_off, dtype=np.int64),
        fac_abs_coeffs=abs_coeffs,
        R=fd.R,
        log_R=math.log(fd.R),
        log_m=math.log(fd.m),
        log_M=math.log(fd.M),
        M0=fd.M0,
        log_B=log_B,
        lift=lift,
        gen_log_m=g_log_m,
        gen_log_M=g_log_M,
        fac_ylim=ylim,
        fac_xlim=xlim,
    )


def pack(gs, sign: int) -> PackedGenerators:
    """Packed view of a generator set for one dynamical direction.

    sign=PLUS packs the generators themselves; sign=MINUS packs their
    swap-conjugated inverses, after which all kernels run the forward
    V_R^+ machinery on swapped input points.
    """
    if sign == PLUS:
        maps = list(gs.gens)
    elif sign == MINUS:
        maps = [conjugate_inverse_map(H) for H in gs.gens]
    else:
        raise ValueError("sign must be PLUS (1) or MINUS (-1)")
    pk = _pack_direction(maps, gs.filtration)
    _verify_packed(pk)
    return pk


def _verify_packed(pk: PackedGenerators) -> None:
    """Sanity: lower growth constants stay positive at R for every factor."""
    for j in range(len(pk.fac_deg)):
        o = pk.fac_coeff_off[j]
        d = int(pk.fac_deg[j])
        lead = pk.fac_abs_coeffs[o + d]
        slack = sum(
            pk.fac_abs_coeffs[o + i] * pk.R ** (i - d) for i in range(d)
        ) + pk.fac_abs_a[j] * pk.R ** (1 - d)
        if lead - slack <= 0:
            raise ValueError("packed factor infeasible at the certified radius")
