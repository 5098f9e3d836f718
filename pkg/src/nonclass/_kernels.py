"""Hot numeric kernels: coherent-overlap batches and displaced-parity Wigner.

Two implementations exist for each kernel: a numba @njit version and a
pure-numpy vectorized fallback.  The fallback is selected by setting the
environment variable NONCLASS_NO_NUMBA=1 (it is also used automatically
when numba is not importable).  Both paths are deterministic; they agree
to float rounding but not bit-for-bit, since the summation orders differ.
"""

import math
import os

import numpy as np

ENV_FLAG = "NONCLASS_NO_NUMBA"

_want_numba = os.environ.get(ENV_FLAG, "").strip().lower() not in ("1", "true", "yes")
if _want_numba:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        _want_numba = False

if not _want_numba:  # pragma: no cover
    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


def backend():
    """Name of the active kernel path: 'numba' or 'numpy'."""
    return "numba" if _want_numba else "numpy"


# ---------------------------------------------------------------------------
# coherent overlaps  <beta|psi> = e^{-|b|^2/2} sum_n c_n conj(b)^n / sqrt(n!)
# ---------------------------------------------------------------------------

def _overlaps_numpy(amps, betas):
    n_amp = amps.shape[0]
    bc = np.conj(betas)
    term = np.exp(-0.5 * (betas.real**2 + betas.imag**2)).astype(np.complex128)
    acc = amps[0] * term
    for n in range(1, n_amp):
        term = term * bc / math.sqrt(n)
        acc = acc + amps[n] * term
    return acc


@njit(cache=True)
def _overlaps_numba(amps, betas):  # pragma: no cover - exercised via dispatch
    # component arrays + batched inner loop keep the hot path branch-free
    # and vectorizable; the n-dependent constants are hoisted per term
    n_amp = amps.shape[0]
    npts = betas.shape[0]
    tr = np.empty(npts, np.float64)
    ti = np.empty(npts, np.float64)
    br = np.empty(npts, np.float64)
    bi = np.empty(npts, np.float64)
    ar = np.empty(npts, np.float64)
    ai = np.empty(npts, np.float64)
    a0 = amps[0]
    for i in range(npts):
        b = betas[i]
        e = math.exp(-0.5 * (b.real * b.real + b.imag * b.imag))
        tr[i] = e
        ti[i] = 0.0
        br[i] = b.real
        bi[i] = -b.imag
        ar[i] = a0.real * e
        ai[i] = a0.imag * e
    for n in range(1, n_amp):
        inv = 1.0 / math.sqrt(n)
        cr = amps[n].real
        ci = amps[n].imag
        for i in range(npts):
            nr = (tr[i] * br[i] - ti[i] * bi[i]) * inv
            ni = (tr[i] * bi[i] + ti[i] * br[i]) * inv
            tr[i] = nr
            ti[i] = ni
            ar[i] += cr * nr - ci * ni
            ai[i] += cr * ni + ci * nr
    out = np.empty(npts, np.complex128)
    for i in range(npts):
        out[i] = complex(ar[i], ai[i])
    return out


def coherent_overlaps(amps, betas):
    """Batch <beta|psi> for a complex amplitude vector and beta array."""
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    betas = np.ascontiguousarray(betas, dtype=np.complex128)
    if betas.size == 0:
        return np.empty(0, np.complex128)
    if _want_numba:
        return _overlaps_numba(amps, betas)
    return _overlaps_numpy(amps, betas)


# ---------------------------------------------------------------------------
# Wigner by displaced parity, expanded over Fock diagonals:
#   W(beta) = (2/pi) <psi|D(2 beta) P|psi>        (P = photon-number parity)
#           = (2/pi) [ sum_n (-1)^n |c_n|^2 B(n,0,x)
#             + 2 sum_{k>=1} Re( e^{ikt} sum_n (-1)^n conj(c_{n+k}) c_n B(n,k,x) ) ]
# with x = 4|beta|^2, t = arg(2 beta), and the normalized matrix elements
#   B(n,k,x) = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^(k)(x),
# all bounded by 1 in magnitude.  Each fixed-k chain obeys
#   B(n+1) = (2n+k+1-x)/sqrt((n+1)(n+k+1)) B(n)
#            - sqrt(n(n+k)/((n+1)(n+k+1))) B(n-1)
# seeded by B(0) = exp((k ln x - ln k!)/2 - x/2), B(-1) = 0.  Run upward in
# n the chain tracks the dominant solution where the values grow and is
# neutrally stable where they oscillate, so it stays accurate at any
# window radius.  (A row recurrence on <m|D|psi> instead is violently
# unstable past the classical turning point: there the true rows decay
# superexponentially while roundoff rides the growing second solution.)
# A chain whose seed underflows is carried scaled up by e^{644 j} and
# unwound as it grows back; while j > 0 the true values are below ~e^-620
# and are correctly dropped from the sum.
# ---------------------------------------------------------------------------

_SCALE_LOG = 644.0
_SCALE_DOWN = math.exp(-_SCALE_LOG)  # ~1.4e-280, still a normal double
_SEED_FLOOR = -640.0
_UNWIND_AT = 1e20


def _wigner_numpy(amps, betas):
    n_amp = amps.shape[0]
    npts = betas.shape[0]
    out = np.empty(npts, np.float64)
    chunk = 16384
    for start in range(0, npts, chunk):
        g = 2.0 * betas[start:start + chunk]
        pts = g.shape[0]
        x = g.real**2 + g.imag**2
        pos = x > 0.0
        safe = np.where(pos, x, 1.0)
        u = np.where(pos, g / np.sqrt(safe), 1.0 + 0.0j)
        lx = np.log(safe)
        total = np.zeros(pts, np.float64)
        ph = np.ones(pts, np.complex128)
        for k in range(n_amp):
            if k == 0:
                seed = -0.5 * x
            else:
                ph = ph * u
                seed = 0.5 * (k * lx - math.lgamma(k + 1.0)) - 0.5 * x
            j = np.zeros(pts, np.int64)
            low = seed < _SEED_FLOOR
            if low.any():
                j = np.where(low, ((_SEED_FLOOR - seed) // _SCALE_LOG).astype(np.int64) + 1, 0)
                seed = seed + _SCALE_LOG * j
            b_cur = np.exp(seed)
            if k > 0:
                b_cur = np.where(pos, b_cur, 0.0)
            b_prev = np.zeros(pts, np.float64)
            acc = np.zeros(pts, np.complex128)
            any_scaled = bool((j > 0).any())
            sign = 1.0
            for n in range(n_amp - k):
                pair = sign * (np.conj(amps[n + k]) * amps[n])
                if any_scaled:
                    acc = acc + pair * np.where(j == 0, b_cur, 0.0)
                else:
                    acc = acc + pair * b_cur
                ca = (2.0 * n + k + 1.0 - x) / math.sqrt((n + 1.0) * (n + k + 1.0))
                cb = math.sqrt(n * (n + k) / ((n + 1.0) * (n + k + 1.0)))
                b_prev, b_cur = b_cur, ca * b_cur - cb * b_prev
                if any_scaled:
                    grown = (j > 0) & (np.maximum(np.abs(b_cur), np.abs(b_prev)) > _UNWIND_AT)
                    if grown.any():
                        shrink = np.where(grown, _SCALE_DOWN, 1.0)
                        b_cur = b_cur * shrink
                        b_prev = b_prev * shrink
                        j = j - grown
                        any_scaled = bool((j > 0).any())
                sign = -sign
            if k == 0:
                total += acc.real
            else:
                total += 2.0 * (ph * acc).real
        out[start:start + chunk] = (2.0 / math.pi) * total
    return out


@njit(cache=True)
def _wigner_numba(amps, betas):  # pragma: no cover - exercised via dispatch
    # same diagonal expansion as the numpy path, but with the per-(k, n)
    # recurrence coefficients and amplitude pair products hoisted out of
    # the point loop, which is kept branch-free unless a chain on this
    # batch actually runs in the underflow-scaled regime
    n_amp = amps.shape[0]
    npts = betas.shape[0]
    x = np.empty(npts, np.float64)
    lx = np.empty(npts, np.float64)
    ur = np.empty(npts, np.float64)
    ui = np.empty(npts, np.float64)
    phr = np.empty(npts, np.float64)
    phi = np.empty(npts, np.float64)
    total = np.zeros(npts, np.float64)
    for i in range(npts):
        gr = 2.0 * betas[i].real
        gi = 2.0 * betas[i].imag
        xi = gr * gr + gi * gi
        x[i] = xi
        if xi > 0.0:
            inv = 1.0 / math.sqrt(xi)
            ur[i] = gr * inv
            ui[i] = gi * inv
            lx[i] = math.log(xi)
        else:
            ur[i] = 1.0
            ui[i] = 0.0
            lx[i] = 0.0
        phr[i] = 1.0
        phi[i] = 0.0

    b_cur = np.empty(npts, np.float64)
    b_prev = np.empty(npts, np.float64)
    acc_r = np.empty(npts, np.float64)
    acc_i = np.empty(npts, np.float64)
    js = np.empty(npts, np.int64)
    c_lin = np.empty(n_amp, np.float64)
    c_x = np.empty(n_amp, np.float64)
    c_b = np.empty(n_amp, np.float64)
    p_r = np.empty(n_amp, np.float64)
    p_i = np.empty(n_amp, np.float64)

    for k in range(n_amp):
        lgk = math.lgamma(k + 1.0)
        rows = n_amp - k
        sign = 1.0
        for n in range(rows):
            inv_a = 1.0 / math.sqrt((n + 1.0) * (n + k + 1.0))
            c_lin[n] = (2.0 * n + k + 1.0) * inv_a
            c_x[n] = inv_a
            c_b[n] = math.sqrt(n * (n + k)) * inv_a
            hi = amps[n + k]
            lo = amps[n]
            p_r[n] = sign * (hi.real * lo.real + hi.imag * lo.imag)
            p_i[n] = sign * (hi.real * lo.imag - hi.imag * lo.real)
            sign = -sign
        any_scaled = False
        for i in range(npts):
            if k == 0:
                seed = -0.5 * x[i]
            else:
                seed = 0.5 * (k * lx[i] - lgk) - 0.5 * x[i]
            ji = 0
            if seed < _SEED_FLOOR:
                ji = int((_SEED_FLOOR - seed) / _SCALE_LOG) + 1
                seed += _SCALE_LOG * ji
                any_scaled = True
            b = math.exp(seed)
            if k > 0 and x[i] <= 0.0:
                b = 0.0
            b_cur[i] = b
            b_prev[i] = 0.0
            acc_r[i] = 0.0
            acc_i[i] = 0.0
            js[i] = ji
        if not any_scaled:
            for n in range(rows):
                cl = c_lin[n]
                cx = c_x[n]
                cb = c_b[n]
                pr = p_r[n]
                pi = p_i[n]
                for i in range(npts):
                    b = b_cur[i]
                    acc_r[i] += pr * b
                    acc_i[i] += pi * b
                    nxt = (cl - x[i] * cx) * b - cb * b_prev[i]
                    b_prev[i] = b
                    b_cur[i] = nxt
        else:
            for n in range(rows):
                cl = c_lin[n]
                cx = c_x[n]
                cb = c_b[n]
                pr = p_r[n]
                pi = p_i[n]
                for i in range(npts):
                    b = b_cur[i]
                    if js[i] == 0:
                        acc_r[i] += pr * b
                        acc_i[i] += pi * b
                    nxt = (cl - x[i] * cx) * b - cb * b_prev[i]
                    b_prev[i] = b
                    b_cur[i] = nxt
                    if js[i] > 0:
                        big = abs(nxt)
                        if abs(b) > big:
                            big = abs(b)
                        if big > _UNWIND_AT:
                            b_cur[i] = nxt * _SCALE_DOWN
                            b_prev[i] = b * _SCALE_DOWN
                            js[i] -= 1
        if k == 0:
            for i in range(npts):
                total[i] += acc_r[i]
        else:
            for i in range(npts):
                nr = phr[i] * ur[i] - phi[i] * ui[i]
                ni = phr[i] * ui[i] + phi[i] * ur[i]
                phr[i] = nr
                phi[i] = ni
                total[i] += 2.0 * (nr * acc_r[i] - ni * acc_i[i])
    out = np.empty(npts, np.float64)
    for i in range(npts):
        out[i] = (2.0 / math.pi) * total[i]
    return out


def wigner_values(amps, betas):
    """Batch W(beta) for a complex amplitude vector and beta array.

    Points beyond the state's support radius sqrt(N)+6 come back as
    exact 0: the envelope bound (2/pi)e^{-2|b|^2}(sum |c_n|(2|b|)^n/sqrt(n!))^2
    puts the true value below e^{-40} there, so evaluation is skipped.
    """
    amps = np.ascontiguousarray(amps, dtype=np.complex128)
    betas = np.ascontiguousarray(betas, dtype=np.complex128)
    if betas.size == 0:
        return np.empty(0, np.float64)
    abs_b = np.abs(betas)
    support = math.sqrt(max(amps.shape[0] - 1, 0)) + 6.0
    inside = abs_b <= support
    if not inside.all():
        out = np.zeros(betas.shape[0], np.float64)
        if inside.any():
            out[inside] = wigner_values(amps, betas[inside])
        return out
    if _want_numba:
        return _wigner_numba(amps, betas)
    return _wigner_numpy(amps, betas)
