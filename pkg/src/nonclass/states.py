"""Truncated Fock-space states and the operations the pipeline needs.

A state is a vector of Fock amplitudes c_0..c_N with a certified bound on
the probability mass the truncation discarded.  Constructors pick their
own cutoffs so that bound stays below 1e-12; operations are exact linear
maps on the truncated vector.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import AccuracyError, CutoffError, DomainError

TAIL_TARGET = 1e-12
DISPLACEMENT_GUARD = 5.0
_MAX_AUTO_CUTOFF = 250_000


@dataclass(frozen=True)
class PhasePoint:
    """A point beta = re + i*im of the complex phase plane."""

    re: float
    im: float

    def as_complex(self):
        return complex(self.re, self.im)


def _as_complex(beta):
    if isinstance(beta, PhasePoint):
        return beta.as_complex()
    return complex(beta)


@dataclass(frozen=True, eq=False)
class FockState:
    """Truncated Fock expansion of a pure single-mode state.

    amplitudes: complex coefficients c_0..c_cutoff.
    tail_bound: certified upper bound on the discarded probability mass.
    """

    amplitudes: np.ndarray
    cutoff: int
    tail_bound: float

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)
        if self.cutoff < 0 or amps.shape != (self.cutoff + 1,):
            raise ValueError("amplitude vector must have length cutoff+1")
        if not 0.0 <= self.tail_bound:
            raise ValueError("tail_bound must be nonnegative")
        total = float(np.sum(amps.real**2 + amps.imag**2))
        if not (1.0 - self.tail_bound - 5e-15 <= total <= 1.0 + 1e-12 + 5e-15):
            raise ValueError(
                f"squared norm {total} outside [1-tail_bound, 1+1e-12]"
            )

    def norm_sq(self):
        a = self.amplitudes
        return float(np.sum(a.real**2 + a.imag**2))


@dataclass(frozen=True)
class AdditionRecord:
    """Bookkeeping for a photon addition: (a^dag)^p with normalization.

    norm_sq_inv is <(a)^p (a^dag)^p> on the input state, i.e. the inverse
    squared normalization constant of the raised state.
    """

    p: int
    norm_sq_inv: float


def make_coherent(alpha, cutoff_override=None):
    """Coherent state |alpha> truncated with a certified Poisson tail.

    The automatic cutoff ceil(|alpha|^2 + 12 sqrt(|alpha|^2+1) + 20) puts
    the discarded mass far below 1e-12.  A cutoff_override that cannot
    certify that target raises CutoffError.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise DomainError("alpha must be finite")
    mu = abs(alpha) ** 2
    if cutoff_override is None:
        cutoff = math.ceil(mu + 12.0 * math.sqrt(mu + 1.0) + 20.0)
    else:
        cutoff = _check_override(cutoff_override)
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * mu)
    for n in range(1, cutoff + 1):
        amps[n] = amps[n - 1] * alpha / math.sqrt(n)
    tail = _poisson_tail_bound(mu, cutoff)
    if tail > TAIL_TARGET:
        raise CutoffError(
            f"cutoff {cutoff} certifies tail {tail:.3e} > 1e-12 for |alpha|^2={mu:.6g}"
        )
    return FockState(amplitudes=amps, cutoff=cutoff, tail_bound=tail)


def _check_override(cutoff_override):
    if cutoff_override != int(cutoff_override) or int(cutoff_override) < 0:
        raise DomainError(f"cutoff_override must be a nonnegative integer, got {cutoff_override}")
    return int(cutoff_override)


def _poisson_tail_bound(mu, cutoff):
    """Upper bound on the Poisson(mu) mass above `cutoff`.

    Successive pmf ratios beyond the cutoff are at most mu/(cutoff+2),
    giving a geometric bound from the first excluded term.
    """
    if mu == 0.0:
        return 0.0
    q = mu / (cutoff + 2.0)
    if q >= 1.0:
        return math.inf
    log_first = -mu + (cutoff + 1) * math.log(mu) - math.lgamma(cutoff + 2)
    return math.exp(log_first) / (1.0 - q)


def make_squeezed_vacuum(r, phi, cutoff_override=None):
    """Squeezed vacuum with squeeze modulus r and squeeze angle phi.

    Even amplitudes c_{2m} = (cosh r)^{-1/2} (e^{i phi} tanh(r)/2)^m
    sqrt((2m)!)/m!.  The automatic cutoff certifies a geometric tail
    bound below 1e-12.
    """
    if not (math.isfinite(r) and r >= 0.0):
        raise DomainError(f"squeeze modulus r must be finite and >= 0, got {r}")
    if not math.isfinite(phi):
        raise DomainError("squeeze angle phi must be finite")
    t = math.tanh(r)
    t2 = t * t
    if cutoff_override is None:
        if r == 0.0:
            return FockState(np.array([1.0 + 0.0j]), cutoff=0, tail_bound=0.0)
        pairs = None
        prob = 1.0 / math.cosh(r)
        m = 0
        while True:
            nxt = prob * t2 * (2 * m + 1) / (2 * m + 2)
            if nxt / (1.0 - t2) <= 0.5 * TAIL_TARGET:
                pairs = m
                break
            prob = nxt
            m += 1
            if 2 * m > _MAX_AUTO_CUTOFF:
                raise CutoffError(
                    f"r={r} needs a cutoff beyond {_MAX_AUTO_CUTOFF}; "
                    "reduce r or supply amplitudes another way"
                )
        cutoff = 2 * pairs
    else:
        cutoff = _check_override(cutoff_override)
        pairs = cutoff // 2
    amps = np.zeros(cutoff + 1, dtype=np.complex128)
    z = 0.5 * t * complex(math.cos(phi), math.sin(phi))
    val = 1.0 / math.sqrt(math.cosh(r))
    amps[0] = val
    for m in range(1, pairs + 1):
        val = val * z * math.sqrt((2 * m - 1) * (2 * m)) / m
        amps[2 * m] = val
    # certified geometric bound on the first excluded pair onward
    if r == 0.0:
        tail = 0.0
    else:
        p_last = abs(val) ** 2
        p_next = p_last * t2 * (2 * pairs + 1) / (2 * pairs + 2)
        tail = p_next / (1.0 - t2)
    if tail > TAIL_TARGET:
        raise CutoffError(
            f"cutoff {cutoff} certifies tail {tail:.3e} > 1e-12 for r={r:.6g}"
        )
    return FockState(amplitudes=amps, cutoff=cutoff, tail_bound=tail)


def svs_cutoff_for_moment(r, p):
    """Cutoff making the p-weighted squeezed-vacuum tail negligible.

    The moment sum_n |c_n|^2 (n+1)...(n+p) converges much more slowly
    than the mass, so oracle-grade photon addition on squeezed vacuum
    needs a cutoff where the weighted tail is below 1e-13 of a lower
    bound (p! cosh^{2p} r) of the moment itself.
    """
    if p < 0 or p != int(p):
        raise DomainError(f"p must be a nonnegative integer, got {p}")
    p = int(p)
    if r == 0.0:
        return 0
    t2 = math.tanh(r) ** 2
    scale = 1e-13 * math.exp(math.lgamma(p + 1) + 2 * p * math.log(math.cosh(r)))
    prob = 1.0 / math.cosh(r)
    m = 0
    while True:
        m += 1
        prob = prob * t2 * (2 * m - 1) / (2 * m)
        weight = 1.0
        for k in range(1, p + 1):
            weight *= 2 * m + k
        ratio = t2 * (2 * m + p + 1) * (2 * m + p + 2) / ((2 * m + 2) ** 2)
        if ratio < 1.0 and prob * weight / (1.0 - ratio) <= scale:
            return 2 * m
        if 2 * m > _MAX_AUTO_CUTOFF:
            raise CutoffError(f"moment-aware cutoff for r={r}, p={p} exceeds {_MAX_AUTO_CUTOFF}")


def make_fock(p):
    """Fock state |p>; exact at cutoff p."""
    if p < 0 or p != int(p):
        raise DomainError(f"Fock index must be a nonnegative integer, got {p}")
    p = int(p)
    amps = np.zeros(p + 1, dtype=np.complex128)
    amps[p] = 1.0
    return FockState(amplitudes=amps, cutoff=p, tail_bound=0.0)


def add_photons(state, p):
    """Apply (a^dag)^p and renormalize; returns (state, AdditionRecord).

    Amplitudes map as c_{n+p} = c_n sqrt((n+p)!/n!) / sqrt(S) with
    S = sum_n |c_n|^2 (n+1)...(n+p) computed on the truncated input; for
    heavy-tailed inputs pick the input cutoff with the moment in mind
    (see svs_cutoff_for_moment).
    """
    if p < 0 or p != int(p):
        raise DomainError(f"photon count must be a nonnegative integer, got {p}")
    p = int(p)
    if p == 0:
        return state, AdditionRecord(p=0, norm_sq_inv=1.0)
    n = np.arange(state.cutoff + 1, dtype=np.float64)
    weight = np.ones_like(n)
    for k in range(1, p + 1):
        weight *= n + k
    c = state.amplitudes
    norm_sq_inv = float(np.sum((c.real**2 + c.imag**2) * weight))
    out = np.zeros(state.cutoff + p + 1, dtype=np.complex128)
    out[p:] = c * np.sqrt(weight) / math.sqrt(norm_sq_inv)
    new_state = FockState(
        amplitudes=out, cutoff=state.cutoff + p, tail_bound=state.tail_bound
    )
    return new_state, AdditionRecord(p=p, norm_sq_inv=norm_sq_inv)


def displace(state, lam):
    """Apply the displacement D(lam) within an enlarged cutoff.

    The output cutoff is input.cutoff + ceil(|lam|^2 + 12|lam| + 10).
    Matrix rows <m|D|n> satisfy the two-term recurrence
    <m|D|n> = (lam <m-1|D|n> + sqrt(n) <m-1|D|n-1>)/sqrt(m), every entry
    bounded by 1.  If the enlarged cutoff still cannot hold the displaced
    state (norm drop beyond 1e-8), AccuracyError is raised.
    """
    lam = _as_complex(lam)
    if not (math.isfinite(lam.real) and math.isfinite(lam.imag)):
        raise DomainError("displacement must be finite")
    mod = abs(lam)
    if mod > DISPLACEMENT_GUARD:
        raise DomainError(
            f"|lam|={mod:.4g} exceeds the displacement guard {DISPLACEMENT_GUARD}"
        )
    if mod == 0.0:
        return state
    n_in = state.cutoff + 1
    out_cutoff = state.cutoff + math.ceil(mod * mod + 12.0 * mod + 10.0)
    c = state.amplitudes
    sqrt_n = np.sqrt(np.arange(n_in, dtype=np.float64))
    row = np.empty(n_in, dtype=np.complex128)
    row[0] = math.exp(-0.5 * mod * mod)
    neg_conj = -np.conj(lam)
    for n in range(1, n_in):
        row[n] = row[n - 1] * neg_conj / sqrt_n[n]
    out = np.empty(out_cutoff + 1, dtype=np.complex128)
    out[0] = row @ c
    for m in range(1, out_cutoff + 1):
        nxt = np.empty(n_in, dtype=np.complex128)
        nxt[0] = lam * row[0]
        nxt[1:] = lam * row[1:] + sqrt_n[1:] * row[:-1]
        nxt /= math.sqrt(m)
        row = nxt
        out[m] = row @ c
    norm_in = math.sqrt(state.norm_sq())
    norm_out = math.sqrt(float(np.sum(out.real**2 + out.imag**2)))
    loss = norm_in - norm_out
    if abs(loss) > 1e-8:
        raise AccuracyError(
            f"displacement by {lam} lost norm {loss:.3e}; state support is too "
            "wide for the enlarged cutoff"
        )
    mass_loss = max(norm_in * norm_in - norm_out * norm_out, 0.0)
    return FockState(
        amplitudes=out,
        cutoff=out_cutoff,
        tail_bound=state.tail_bound + mass_loss + 1e-15,
    )


def rotate(state, theta):
    """Apply the phase-space rotation c_n -> e^{-i n theta} c_n."""
    if not math.isfinite(theta):
        raise DomainError("rotation angle must be finite")
    n = np.arange(state.cutoff + 1, dtype=np.float64)
    out = state.amplitudes * np.exp(-1j * theta * n)
    return FockState(amplitudes=out, cutoff=state.cutoff, tail_bound=state.tail_bound)


def coherent_overlap(state, beta):
    """<beta|psi> = e^{-|beta|^2/2} sum_n c_n conj(beta)^n / sqrt(n!)."""
    beta = _as_complex(beta)
    return complex(
        _kernels.coherent_overlaps(state.amplitudes, np.array([beta]))[0]
    )


def antinormal_correlation(state, p):
    """<a^p (a^dag)^p> = sum_n |c_n|^2 (n+1)...(n+p) on the truncated state."""
    if p < 0 or p != int(p):
        raise DomainError(f"p must be a nonnegative integer, got {p}")
    p = int(p)
    n = np.arange(state.cutoff + 1, dtype=np.float64)
    weight = np.ones_like(n)
    for k in range(1, p + 1):
        weight *= n + k
    c = state.amplitudes
    return float(np.sum((c.real**2 + c.imag**2) * weight))


def mean_photon(state):
    """<n> on the truncated state."""
    c = state.amplitudes
    n = np.arange(state.cutoff + 1, dtype=np.float64)
    return float(np.sum((c.real**2 + c.imag**2) * n))
