# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: same algorithms and float op order as pure.py.

The pure module is the reference; any behavioural change must land in
both.  Parity is enforced by tests/test_kernels_parity.py.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, exp, hypot, log, log1p

from ..maps import OverflowSignal
from .packed import LOG_PAD as _LOG_PAD

cnp.import_array()

cdef double LOG_PAD = _LOG_PAD
cdef double S_OUT = 1.0 + 1e-13

VERDICT_STRONG = 0
VERDICT_WEAK = 1
VERDICT_BOUNDED = 2
VERDICT_UNDETERMINED = 3


cdef class PackedView:
    """C-typed mirror of PackedGenerators, cached on the packed object."""
    cdef long n_gens, D
    cdef double q, R, log_R, log_m, log_M, M0, log_B, lift, switch_mag
    cdef long d_min, d_max
    cdef long[::1] gen_deg, gen_off, fac_deg, fac_coeff_off
    cdef double complex[::1] fac_a, fac_coeffs
    cdef double[::1] fac_abs_a, fac_abs_coeffs, fac_ylim, fac_xlim
    cdef double[::1] gen_log_m, gen_log_M, Dinv_pow

    def __init__(self, pk):
        self.n_gens = pk.n_gens
        self.D = pk.D
        self.q = pk.q
        self.R = pk.R
        self.log_R = pk.log_R
        self.log_m = pk.log_m
        self.log_M = pk.log_M
        self.M0 = pk.M0
        self.log_B = pk.log_B
        self.lift = pk.lift
        self.switch_mag = pk.switch_mag
        self.d_min = pk.d_min
        self.d_max = pk.d_max
        self.gen_deg = np.ascontiguousarray(pk.gen_deg, dtype=np.int64)
        self.gen_off = np.ascontiguousarray(pk.gen_off, dtype=np.int64)
        self.fac_deg = np.ascontiguousarray(pk.fac_deg, dtype=np.int64)
        self.fac_coeff_off = np.ascontiguousarray(pk.fac_coeff_off, dtype=np.int64)
        self.fac_a = np.ascontiguousarray(pk.fac_a, dtype=np.complex128)
        self.fac_coeffs = np.ascontiguousarray(pk.fac_coeffs, dtype=np.complex128)
        self.fac_abs_a = np.ascontiguousarray(pk.fac_abs_a, dtype=np.float64)
        self.fac_abs_coeffs = np.ascontiguousarray(pk.fac_abs_coeffs, dtype=np.float64)
        self.fac_ylim = np.ascontiguousarray(pk.fac_ylim, dtype=np.float64)
        self.fac_xlim = np.ascontiguousarray(pk.fac_xlim, dtype=np.float64)
        self.gen_log_m = np.ascontiguousarray(pk.gen_log_m, dtype=np.float64)
        self.gen_log_M = np.ascontiguousarray(pk.gen_log_M, dtype=np.float64)
        self.Dinv_pow = np.ascontiguousarray(pk.Dinv_pow, dtype=np.float64)


cdef PackedView _view(pk):
    view = getattr(pk, "_cview", None)
    if view is None:
        view = PackedView(pk)
        object.__setattr__(pk, "_cview", view)
    return <PackedView>view


cdef inline double cmag(double complex z) nogil:
    # matches CPython's abs(complex), which uses hypot
    return hypot(z.real, z.imag)


cdef inline void factor_log_bounds(PackedView pk, Py_ssize_t fi, double llo,
                                   double* bl, double* bh) nogil:
    cdef Py_ssize_t o = pk.fac_coeff_off[fi]
    cdef long d = pk.fac_deg[fi]
    cdef double lead = pk.fac_abs_coeffs[o + d]
    cdef double s = 0.0
    cdef double c
    cdef Py_ssize_t j
    for j in range(d):
        c = pk.fac_abs_coeffs[o + j]
        if c != 0.0:
            s += c * exp((j - d) * llo)
    s += pk.fac_abs_a[fi] * exp((1.0 - d) * llo)
    s = s / lead * S_OUT
    cdef double log_lead = log(lead)
    cdef double s_down = s if s < 1.0 else 1.0 - 1e-16
    bl[0] = log_lead + log1p(-s_down)
    bh[0] = log_lead + log1p(s)


cdef void close_subtree_c(PackedView pk, double llo, double lhi, long tail_depth,
                          double* out_lo, double* out_hi) nogil:
    cdef double q = pk.q
    cdef double base_lo = llo
    cdef double base_hi = lhi
    cdef double acc_lo = 0.0
    cdef double acc_hi = 0.0
    cdef double wgt = 1.0
    cdef double inv_D = 1.0 / pk.D
    cdef long n = pk.n_gens
    cdef long t, gi
    cdef Py_ssize_t fi
    cdef double sum_lo, sum_hi, c_lo, c_hi, t_lo, t_hi, m_lo, m_hi, bl, bh
    cdef long d
    for t in range(tail_depth):
        sum_lo = 0.0
        sum_hi = 0.0
        c_lo = INFINITY
        c_hi = -INFINITY
        for gi in range(n):
            t_lo = 0.0
            t_hi = 0.0
            m_lo = llo
            m_hi = lhi
            for fi in range(pk.gen_off[gi], pk.gen_off[gi + 1]):
                factor_log_bounds(pk, fi, m_lo, &bl, &bh)
                d = pk.fac_deg[fi]
                t_lo = d * t_lo + bl
                t_hi = d * t_hi + bh
                m_lo = d * m_lo + bl
                m_hi = d * m_hi + bh
            sum_lo += t_lo
            sum_hi += t_hi
            if m_lo < c_lo:
                c_lo = m_lo
            if m_hi > c_hi:
                c_hi = m_hi
        acc_lo += wgt * inv_D * sum_lo
        acc_hi += wgt * inv_D * sum_hi
        llo = c_lo
        lhi = c_hi
        wgt *= q
    cdef double s_lo = 0.0
    cdef double s_hi = 0.0
    for gi in range(n):
        s_lo += pk.gen_log_m[gi]
        s_hi += pk.gen_log_M[gi]
    cdef double rem = wgt * inv_D / (1.0 - q)
    acc_lo += rem * s_lo
    acc_hi += rem * s_hi
    out_lo[0] = base_lo + acc_lo - 1e-12
    out_hi[0] = base_hi + acc_hi + 1e-12


cdef void _finish_chain_asym(PackedView pk, long gi, Py_ssize_t fi_start,
                             double* llo, double* lhi) nogil:
    cdef Py_ssize_t fi
    cdef double bl, bh
    cdef long d
    for fi in range(fi_start, pk.gen_off[gi + 1]):
        factor_log_bounds(pk, fi, llo[0], &bl, &bh)
        d = pk.fac_deg[fi]
        llo[0] = d * llo[0] + bl
        lhi[0] = d * lhi[0] + bh


cdef int apply_generator_c(PackedView pk, long gi, double complex* zx,
                           double complex* zy, double* llo, double* lhi) nogil except -1:
    """Returns mode: 0 exact (zx, zy valid), 1 asymptotic (llo, lhi valid)."""
    cdef Py_ssize_t fi, o, j
    cdef long d
    cdef double ay, lmid
    cdef double complex acc, x, y
    x = zx[0]
    y = zy[0]
    for fi in range(pk.gen_off[gi], pk.gen_off[gi + 1]):
        ay = cmag(y)
        if ay >= pk.switch_mag and ay >= cmag(x):
            lmid = log(ay)
            llo[0] = lmid - LOG_PAD
            lhi[0] = lmid + LOG_PAD
            _finish_chain_asym(pk, gi, fi, llo, lhi)
            return 1
        if ay > pk.fac_ylim[fi] or cmag(x) > pk.fac_xlim[fi]:
            with gil:
                raise OverflowSignal("orbit left the exactly representable range")
        o = pk.fac_coeff_off[fi]
        d = pk.fac_deg[fi]
        acc = 0
        for j in range(o + d, o - 1, -1):
            acc = acc * y + pk.fac_coeffs[j]
        acc = acc - pk.fac_a[fi] * x
        x = y
        y = acc
    zx[0] = x
    zy[0] = y
    return 0


cdef int _green_estimate_loop(PackedView pk, double complex zx, double complex zy,
                              long max_depth, long tail_depth, long node_budget,
                              int* s_mode, double complex* s_x, double complex* s_y,
                              double* s_llo, double* s_lhi, long* s_depth,
                              double* p_lo, double* p_hi, long* p_leaves,
                              long* p_deepest, int* p_flag) nogil except -1:
    cdef long top = 0
    cdef long nodes = 0
    cdef long depth, gi
    cdef int mode, cm
    cdef double complex x, y
    cdef double llo, lhi, w, ax, ay, lmid, clo, chi, nrm, ub, alt
    cdef int budget_hit
    s_mode[0] = 0
    s_x[0] = zx
    s_y[0] = zy
    s_llo[0] = 0.0
    s_lhi[0] = 0.0
    s_depth[0] = 0
    top = 1
    while top > 0:
        top -= 1
        mode = s_mode[top]
        x = s_x[top]
        y = s_y[top]
        llo = s_llo[top]
        lhi = s_lhi[top]
        depth = s_depth[top]
        nodes += 1
        if depth > p_deepest[0]:
            p_deepest[0] = depth
        w = pk.Dinv_pow[depth]
        if mode == 1:
            close_subtree_c(pk, llo, lhi, tail_depth, &clo, &chi)
            p_lo[0] += w * clo
            p_hi[0] += w * chi
            p_leaves[0] += 1
            continue
        ax = cmag(x)
        ay = cmag(y)
        budget_hit = nodes > node_budget
        if ay >= ax and ay >= pk.R:
            if ay >= pk.switch_mag or depth >= max_depth or budget_hit:
                lmid = log(ay)
                close_subtree_c(pk, lmid - LOG_PAD, lmid + LOG_PAD, tail_depth,
                                &clo, &chi)
                p_lo[0] += w * clo
                p_hi[0] += w * chi
                p_leaves[0] += 1
                if budget_hit and ay < pk.switch_mag and depth < max_depth:
                    p_flag[0] = 1
                continue
        elif depth >= max_depth or budget_hit:
            nrm = ax if ax > ay else ay
            ub = (log(nrm) if nrm > 1.0 else 0.0) + pk.lift
            if nrm <= pk.R:
                alt = pk.q * (pk.log_B + pk.lift)
                if alt < ub:
                    ub = alt
            p_hi[0] += w * ub
            p_leaves[0] += 1
            if budget_hit and depth < max_depth:
                p_flag[0] = 1
            continue
        for gi in range(pk.n_gens - 1, -1, -1):
            s_x[top] = x
            s_y[top] = y
            cm = apply_generator_c(pk, gi, &s_x[top], &s_y[top],
                                   &s_llo[top], &s_lhi[top])
            s_mode[top] = cm
            s_depth[top] = depth + 1
            top += 1
    return 0


cdef class _Workspace:
    """DFS stack buffers, one per traversal batch."""
    cdef cnp.ndarray mode_a, x_a, y_a, llo_a, lhi_a, depth_a
    cdef int* mode
    cdef double complex* x
    cdef double complex* y
    cdef double* llo
    cdef double* lhi
    cdef long* depth

    def __init__(self, long cap):
        self.mode_a = np.empty(cap, dtype=np.int32)
        self.x_a = np.empty(cap, dtype=np.complex128)
        self.y_a = np.empty(cap, dtype=np.complex128)
        self.llo_a = np.empty(cap, dtype=np.float64)
        self.lhi_a = np.empty(cap, dtype=np.float64)
        self.depth_a = np.empty(cap, dtype=np.int64)
        self.mode = <int*>cnp.PyArray_DATA(self.mode_a)
        self.x = <double complex*>cnp.PyArray_DATA(self.x_a)
        self.y = <double complex*>cnp.PyArray_DATA(self.y_a)
        self.llo = <double*>cnp.PyArray_DATA(self.llo_a)
        self.lhi = <double*>cnp.PyArray_DATA(self.lhi_a)
        self.depth = <long*>cnp.PyArray_DATA(self.depth_a)


def close_subtree(pk, double llo, double lhi, long tail_depth):
    cdef PackedView v = _view(pk)
    cdef double lo = 0.0
    cdef double hi = 0.0
    close_subtree_c(v, llo, lhi, tail_depth, &lo, &hi)
    return (lo, hi)


def apply_generator(pk, long gi, zx, zy):
    cdef PackedView v = _view(pk)
    cdef double complex x = zx
    cdef double complex y = zy
    cdef double llo = 0.0
    cdef double lhi = 0.0
    cdef int mode = apply_generator_c(v, gi, &x, &y, &llo, &lhi)
    if mode == 0:
        return (0, complex(x), complex(y), 0.0, 0.0)
    return (1, 0j, 0j, llo, lhi)


def green_estimate_point(pk, zx, zy, long max_depth, long tail_depth, long node_budget):
    cdef PackedView v = _view(pk)
    cdef _Workspace ws = _Workspace((max_depth + 2) * v.n_gens + 4)
    cdef double lo = 0.0
    cdef double hi = 0.0
    cdef long leaves = 0
    cdef long deepest = 0
    cdef int flag = 0
    cdef double complex cx = zx
    cdef double complex cy = zy
    with nogil:
        _green_estimate_loop(v, cx, cy, max_depth, tail_depth, node_budget,
                             ws.mode, ws.x, ws.y, ws.llo, ws.lhi, ws.depth,
                             &lo, &hi, &leaves, &deepest, &flag)
    if lo < 0.0:
        lo = 0.0
    if hi < lo:
        hi = lo
    return (lo, hi, leaves, deepest, flag != 0)


def green_estimate_rows(pk, zxs, zys, long max_depth, long tail_depth,
                        long node_budget, out_lo, out_hi, out_leaves, out_flag):
    cdef PackedView v = _view(pk)
    cdef _Workspace ws = _Workspace((max_depth + 2) * v.n_gens + 4)
    cdef double complex[::1] xs = np.ascontiguousarray(zxs, dtype=np.complex128)
    cdef double complex[::1] ys = np.ascontiguousarray(zys, dtype=np.complex128)
    cdef double[::1] olo = out_lo
    cdef double[::1] ohi = out_hi
    cdef long[::1] olv = out_leaves
    cdef cnp.int8_t[::1] ofl = out_flag
    cdef Py_ssize_t i, n = xs.shape[0]
    cdef double lo, hi
    cdef long leaves, deepest
    cdef int flag
    with nogil:
        for i in range(n):
            lo = 0.0
            hi = 0.0
            leaves = 0
            deepest = 0
            flag = 0
            _green_estimate_loop(v, xs[i], ys[i], max_depth, tail_depth, node_budget,
                                 ws.mode, ws.x, ws.y, ws.llo, ws.lhi, ws.depth,
                                 &lo, &hi, &leaves, &deepest, &flag)
            if lo < 0.0:
                lo = 0.0
            if hi < lo:
                hi = lo
            olo[i] = lo
            ohi[i] = hi
            olv[i] = leaves
            ofl[i] = 1 if flag else 0


def green_levels_point(pk, zx, zy, long kmax):
    cdef PackedView v = _view(pk)
    cdef _Workspace ws = _Workspace((kmax + 2) * v.n_gens + 4)
    vals = np.zeros(kmax + 1, dtype=np.float64)
    cdef double[::1] vv = vals
    cdef long top, depth, gi
    cdef int mode, cm
    cdef double complex x, y
    cdef double llo, lhi, w, vval, ax, ay, nrm
    ws.mode[0] = 0
    ws.x[0] = zx
    ws.y[0] = zy
    ws.llo[0] = 0.0
    ws.lhi[0] = 0.0
    ws.depth[0] = 0
    top = 1
    with nogil:
        while top > 0:
            top -= 1
            mode = ws.mode[top]
            x = ws.x[top]
            y = ws.y[top]
            llo = ws.llo[top]
            lhi = ws.lhi[top]
            depth = ws.depth[top]
            w = v.Dinv_pow[depth]
            if mode == 0:
                ax = cmag(x)
                ay = cmag(y)
                nrm = ax if ax > ay else ay
                vval = log(nrm) if nrm > 1.0 else 0.0
            else:
                vval = 0.5 * (llo + lhi)
            vv[depth] += w * vval
            if depth == kmax:
                continue
            for gi in range(v.n_gens - 1, -1, -1):
                if mode == 0:
                    ws.x[top] = x
                    ws.y[top] = y
                    cm = apply_generator_c(v, gi, &ws.x[top], &ws.y[top],
                                           &ws.llo[top], &ws.lhi[top])
                    ws.mode[top] = cm
                else:
                    ws.llo[top] = llo
                    ws.lhi[top] = lhi
                    _finish_chain_asym(v, gi, v.gen_off[gi], &ws.llo[top], &ws.lhi[top])
                    ws.mode[top] = 1
                ws.depth[top] = depth + 1
                top += 1
    return vals


cdef int _classify_visit(PackedView pk, double complex x, double complex y, long d,
                         long depth, long node_budget, long* nodes, long* cert,
                         long* witness_len, long* path, int* budget_hit) except -1:
    """Recursive DFS; returns 1 when the whole subtree escape-certifies."""
    nodes[0] += 1
    if nodes[0] > node_budget:
        budget_hit[0] = 1
        return 0
    cdef double ay = cmag(y)
    if ay >= cmag(x) and ay >= pk.R:
        if witness_len[0] < 0 and d > 0:
            witness_len[0] = d
        if d > cert[0]:
            cert[0] = d
        return 1
    if d >= depth:
        return 0
    cdef int all_escaped = 1
    cdef long gi
    cdef int cm, sub
    cdef double complex cx, cy
    cdef double cllo, clhi
    for gi in range(pk.n_gens):
        if witness_len[0] < 0:
            path[d] = gi + 1
        cx = x
        cy = y
        cllo = 0.0
        clhi = 0.0
        cm = apply_generator_c(pk, gi, &cx, &cy, &cllo, &clhi)
        if cm == 1:
            if witness_len[0] < 0:
                witness_len[0] = d + 1
            if d + 1 > cert[0]:
                cert[0] = d + 1
            continue
        sub = _classify_visit(pk, cx, cy, d + 1, depth, node_budget, nodes, cert,
                              witness_len, path, budget_hit)
        if sub == 0:
            all_escaped = 0
            if witness_len[0] >= 0:
                break
    return all_escaped


def classify_point_kernel(pk, zx, zy, long depth, long node_budget):
    cdef PackedView v = _view(pk)
    cdef double complex x = zx
    cdef double complex y = zy
    cdef double ay0 = cmag(y)
    if ay0 >= cmag(x) and ay0 >= v.R:
        return (VERDICT_STRONG, 0, None)
    path_arr = np.zeros(max(depth, 1), dtype=np.int64)
    cdef long* path = <long*>cnp.PyArray_DATA(path_arr)
    cdef long nodes = 0
    cdef long cert = 0
    cdef long witness_len = -1
    cdef int budget_hit = 0
    cdef int strong = _classify_visit(v, x, y, 0, depth, node_budget, &nodes,
                                      &cert, &witness_len, path, &budget_hit)
    if budget_hit:
        strong = 0
    witness = None
    if witness_len >= 0:
        witness = tuple(int(path_arr[i]) for i in range(witness_len))
    if strong:
        return (VERDICT_STRONG, int(cert), witness)
    if witness is not None:
        return (VERDICT_WEAK, len(witness), witness)
    if budget_hit:
        return (VERDICT_UNDETERMINED, int(depth), None)
    return (VERDICT_BOUNDED, int(depth), None)


def classify_rows(pk, zxs, zys, long depth, long node_budget, out_verdict, out_cert):
    cdef Py_ssize_t i, n = len(zxs)
    for i in range(n):
        verdict, cert, _ = classify_point_kernel(pk, zxs[i], zys[i], depth, node_budget)
        out_verdict[i] = verdict
        out_cert[i] = cert


def na_orbit(pk, indices, zx, zy):
    cdef PackedView v = _view(pk)
    cdef long[::1] idx = np.ascontiguousarray(indices, dtype=np.int64)
    cdef Py_ssize_t k = idx.shape[0]
    lo = np.zeros(k + 1, dtype=np.float64)
    hi = np.zeros(k + 1, dtype=np.float64)
    degs = np.ones(k + 1, dtype=np.float64)
    cdef double[::1] vlo = lo
    cdef double[::1] vhi = hi
    cdef double[::1] vdg = degs
    cdef int mode = 0
    cdef double complex x = zx
    cdef double complex y = zy
    cdef double llo = 0.0
    cdef double lhi = 0.0
    cdef long entered = -1
    cdef double dcur = 1.0
    cdef double nrm, vv, ax, ay
    cdef Py_ssize_t s
    cdef long gi
    ax = cmag(x)
    ay = cmag(y)
    nrm = ax if ax > ay else ay
    vv = log(nrm) if nrm > 1.0 else 0.0
    vlo[0] = vv
    vhi[0] = vv
    if ay >= ax and ay >= v.R:
        entered = 0
    for s in range(1, k + 1):
        gi = idx[s - 1]
        dcur *= <double>v.gen_deg[gi]
        vdg[s] = dcur
        if mode == 0:
            mode = apply_generator_c(v, gi, &x, &y, &llo, &lhi)
        else:
            _finish_chain_asym(v, gi, v.gen_off[gi], &llo, &lhi)
        if mode == 0:
            ax = cmag(x)
            ay = cmag(y)
            nrm = ax if ax > ay else ay
            vv = log(nrm) if nrm > 1.0 else 0.0
            vlo[s] = vv / dcur
            vhi[s] = vv / dcur
            if entered < 0 and ay >= ax and ay >= v.R:
                entered = s
        else:
            vlo[s] = llo / dcur
            vhi[s] = lhi / dcur
            if entered < 0:
                entered = s
    return (lo, hi, degs, int(entered))


cdef void _equidist_gen_asym_c(PackedView pk, long gi, double* lx, double* ly) nogil:
    cdef Py_ssize_t fi
    cdef double bl, bh, prev
    cdef long d
    for fi in range(pk.gen_off[gi], pk.gen_off[gi + 1]):
        factor_log_bounds(pk, fi, ly[0], &bl, &bh)
        d = pk.fac_deg[fi]
        prev = ly[0]
        ly[0] = d * ly[0] + 0.5 * (bl + bh)
        lx[0] = prev


cdef tuple _equidist_recover(PackedView pk, long gi, double complex x, double complex y):
    cdef double ax = cmag(x)
    cdef double ay = cmag(y)
    cdef double lx = log(ax) if ax > 0.0 else -1e300
    cdef double ly = log(ay) if ay > 0.0 else -1e300
    cdef Py_ssize_t fi, o, j
    cdef long d
    cdef double bl, bh, prev
    cdef double complex acc
    for fi in range(pk.gen_off[gi], pk.gen_off[gi + 1]):
        if ly >= log(pk.switch_mag) and ly >= lx:
            factor_log_bounds(pk, fi, ly, &bl, &bh)
            d = pk.fac_deg[fi]
            prev = ly
            ly = d * ly + 0.5 * (bl + bh)
            lx = prev
        else:
            o = pk.fac_coeff_off[fi]
            d = pk.fac_deg[fi]
            acc = 0
            for j in range(o + d, o - 1, -1):
                acc = acc * y + pk.fac_coeffs[j]
            acc = acc - pk.fac_a[fi] * x
            x = y
            y = acc
            ax = cmag(x)
            ay = cmag(y)
            lx = log(ax) if ax > 0.0 else -1e300
            ly = log(ay) if ay > 0.0 else -1e300
    return (lx, ly)


def equidist_point(pk, qc_in, zx, zy, long k):
    cdef PackedView v = _view(pk)
    qc = np.ascontiguousarray(qc_in, dtype=np.complex128)
    cdef double complex[:, ::1] q = qc
    cdef Py_ssize_t A = qc.shape[0] - 1
    cdef Py_ssize_t B = qc.shape[1] - 1
    cdef double w = v.Dinv_pow[k]
    cdef double total = 0.0
    cdef int hit_zero = 0
    stack = [(0, complex(zx), complex(zy), 0.0, 0.0, 0)]
    cdef int mode, cm
    cdef double complex x, y, acc, inner, cx, cy
    cdef double lx, ly, best, cand, aq, ay, cllo, clhi, nlx, nly
    cdef long depth, gi
    cdef Py_ssize_t a, b
    while stack:
        mode, x, y, lx, ly, depth = stack.pop()
        if depth == k:
            if mode == 0:
                acc = 0
                for a in range(A, -1, -1):
                    inner = 0
                    for b in range(B, -1, -1):
                        inner = inner * y + q[a, b]
                    acc = acc * x + inner
                if acc == 0:
                    hit_zero = 1
                else:
                    total += w * log(cmag(acc))
            else:
                best = -INFINITY
                for a in range(A + 1):
                    for b in range(B + 1):
                        aq = cmag(q[a, b])
                        if aq != 0.0:
                            cand = log(aq) + a * lx + b * ly
                            if cand > best:
                                best = cand
                total += w * best
            continue
        for gi in range(v.n_gens - 1, -1, -1):
            if mode == 0:
                ay = cmag(y)
                if ay >= v.switch_mag and ay >= cmag(x):
                    aq = cmag(x)
                    nlx = log(aq) if aq > 0.0 else -1e300
                    nly = log(ay)
                    _equidist_gen_asym_c(v, gi, &nlx, &nly)
                    stack.append((1, 0j, 0j, nlx, nly, depth + 1))
                    continue
                cx = x
                cy = y
                cllo = 0.0
                clhi = 0.0
                cm = apply_generator_c(v, gi, &cx, &cy, &cllo, &clhi)
                if cm == 1:
                    nlx, nly = _equidist_recover(v, gi, x, y)
                    stack.append((1, 0j, 0j, nlx, nly, depth + 1))
                else:
                    stack.append((0, complex(cx), complex(cy), 0.0, 0.0, depth + 1))
            else:
                nlx = lx
                nly = ly
                _equidist_gen_asym_c(v, gi, &nlx, &nly)
                stack.append((1, 0j, 0j, nlx, nly, depth + 1))
    return (total, hit_zero != 0)
