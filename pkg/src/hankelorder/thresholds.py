"""Hard thresholds for the singular values of Gaussian noise matrices.

``tau_complex`` bounds the spectral norm of a Hankel matrix generated by
complex white Gaussian noise, ``tau_real`` does the same for real noise via a
matrix concentration inequality, and ``tau_gavish`` is the asymptotically
optimal threshold for matrices with i.i.d. entries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_noise_level, check_positive_int, check_probability, check_signal
from .hankel import HankelShape

DEFAULT_BETA = 0.9

COMPLEX_HANKEL = "complex_hankel_t1"
REAL_HANKEL = "real_hankel_t2"
GAVISH = "gavish_t3"
KINDS = (COMPLEX_HANKEL, REAL_HANKEL, GAVISH)

# short names accepted by the estimators and the CLI
ALIASES = {
    "t1": COMPLEX_HANKEL, "tau1": COMPLEX_HANKEL, "complex": COMPLEX_HANKEL,
    "t2": REAL_HANKEL, "tau2": REAL_HANKEL, "real": REAL_HANKEL,
    "t3": GAVISH, "tau3": GAVISH, "gavish": GAVISH,
}


def _dims(m, n):
    return check_positive_int(m, name="m"), check_positive_int(n, name="n")


def tau_complex(m: int, n: int, eta: float, beta: float = DEFAULT_BETA) -> float:
    """Level ``tau`` with ``P[||H_w||_2 <= tau] >= beta`` for ``w ~ CN(0, eta^2 I)``."""
    m, n = _dims(m, n)
    beta = check_probability(beta)
    eta = check_noise_level(eta, allow_zero=True)
    K = m + n - 1
    # 1 - beta**(1/K) via expm1: beta**(1/K) is close to 1 for large K
    return math.sqrt(-K * eta**2 * math.log(-math.expm1(math.log(beta) / K)))


def tau_real(m: int, n: int, eta: float, beta: float = DEFAULT_BETA) -> float:
    """Concentration bound on ``||H_w||_2`` for real ``w ~ N(0, eta^2 I)``, held with probability ``beta``."""
    m, n = _dims(m, n)
    beta = check_probability(beta)
    eta = check_noise_level(eta, allow_zero=True)
    return math.sqrt(-2 * max(m, n) * eta**2 * math.log((1 - beta) / (m + n)))


def kappa(c: float) -> float:
    """Optimal hard-threshold coefficient for aspect ratio ``c = n/m <= 1``."""
    if not (isinstance(c, (int, float, np.floating)) and 0 < c <= 1):
        raise ValueError(f"aspect ratio must lie in (0, 1], got {c!r}")
    return math.sqrt(2 * (c + 1) * 8 * c / (c + 1 + math.sqrt(c * c + 14 * c + 1)))


def tau_gavish(m: int, n: int, eta: float) -> float:
    m, n = _dims(m, n)
    eta = check_noise_level(eta, allow_zero=True)
    big, small = max(m, n), min(m, n)
    return kappa(small / big) * math.sqrt(big) * eta


@dataclass(frozen=True)
class ThresholdSpec:
    kind: str
    m: int
    n: int
    eta: float
    beta: float = DEFAULT_BETA

    def __post_init__(self):
        object.__setattr__(self, "kind", resolve_kind(self.kind))
        HankelShape(self.m, self.n)
        check_noise_level(self.eta, allow_zero=True)
        check_probability(self.beta)

    def value(self) -> float:
        if self.kind == COMPLEX_HANKEL:
            return tau_complex(self.m, self.n, self.eta, self.beta)
        if self.kind == REAL_HANKEL:
            return tau_real(self.m, self.n, self.eta, self.beta)
        return tau_gavish(self.m, self.n, self.eta)


def resolve_kind(kind: str) -> str:
    kind = ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown threshold kind {kind!r}; choose from {KINDS + tuple(ALIASES)}")
    return kind


def threshold(kind: str, m: int, n: int, eta: float, beta: float = DEFAULT_BETA) -> float:
    return ThresholdSpec(kind, m, n, eta, beta).value()


def mp_density(x, c: float):
    """Marchenko-Pastur density of the singular values of ``W / sqrt(m)``, ``c = n/m``."""
    if not 0 < c <= 1:
        raise ValueError(f"aspect ratio must lie in (0, 1], got {c!r}")
    x = np.asarray(x, dtype=float)
    lo, hi = 1 - math.sqrt(c), 1 + math.sqrt(c)
    inside = (x >= lo) & (x <= hi) & (x > 0)
    xs = np.where(inside, x, 1.0)
    radicand = np.clip(4 * c - (xs**2 - 1 - c) ** 2, 0.0, None)
    out = np.where(inside, np.sqrt(radicand) / (np.pi * c * xs), 0.0)
    return float(out) if out.ndim == 0 else out


def circulant_norm_bound(w, m: int, n: int) -> float:
    """Largest modulus of the unnormalised DFT of ``w``; dominates ``||hankel(w)||_2``."""
    m, n = _dims(m, n)
    w = check_signal(w, name="w")
    if w.size != m + n - 1:
        raise ValueError(f"need m + n - 1 = {m + n - 1} samples, got {w.size}")
    return float(np.max(np.abs(np.fft.fft(w))))


def hankel_norm_cdf_lower(tau: float, m: int, n: int, eta: float) -> float:
    """Lower bound on ``P[||H_w||_2 <= tau]`` for complex white Gaussian ``w``."""
    m, n = _dims(m, n)
    eta = check_noise_level(eta)
    if tau < 0:
        return 0.0
    if math.isinf(tau):
        return 1.0
    K = m + n - 1
    return float((-math.expm1(-(tau**2) / (K * eta**2))) ** K)
