"""Order-selection rules: hard threshold, ESTER, SAMOS and the constrained rule."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .criteria import CRITERIA, CriterionTrace, DegenerateCostError, criterion_trace, default_s_max
from .hankel import SvdSubspaces

THRESHOLD = "threshold"
RULES = ("threshold", "ester", "samos", "constrained")


class OrderSelectionError(ValueError):
    """A rule could not produce an order for the given input."""


@dataclass(frozen=True)
class SelectionResult:
    r_hat: int
    rule: str
    trace: CriterionTrace | None = None
    s_star: int | None = None
    tau_used: float | None = None

    def to_dict(self) -> dict:
        out = {"r_hat": self.r_hat, "rule": self.rule, "s_star": self.s_star, "tau": self.tau_used}
        if self.trace is not None:
            out["criterion"] = self.trace.kind
            out["trace"] = [None if not np.isfinite(c) else float(c) for c in self.trace.costs]
        return out


def _check_sorted(singular_values) -> np.ndarray:
    sv = np.asarray(singular_values, dtype=float)
    if sv.ndim != 1:
        raise ValueError("singular values must form a 1-D array")
    if np.any(sv < 0) or np.any(np.diff(sv) > 0):
        raise ValueError("singular values must be non-negative and non-increasing")
    return sv


def count_above(singular_values, tau: float) -> int:
    """Number of singular values strictly above ``tau``.

    Values at or below the round-off floor ``sigma_1 * len * eps`` never count,
    so ``tau = 0`` returns the numerical rank rather than the matrix size.
    """
    sv = _check_sorted(singular_values)
    if tau < 0:
        raise ValueError(f"tau must be >= 0, got {tau}")
    if sv.size == 0:
        return 0
    floor = sv[0] * sv.size * np.finfo(float).eps
    return int(np.count_nonzero(sv > max(tau, floor)))


def select_threshold(singular_values, tau: float) -> SelectionResult:
    r_hat = count_above(singular_values, tau)
    return SelectionResult(r_hat, THRESHOLD, tau_used=float(tau), s_star=None)


def _select_criterion(subspaces: SvdSubspaces, kind: str, s_max: int | None, trace=None) -> SelectionResult:
    trace = criterion_trace(subspaces, kind, s_max) if trace is None else trace
    try:
        r_hat = trace.argmin()
    except DegenerateCostError as exc:
        raise OrderSelectionError(str(exc)) from exc
    return SelectionResult(r_hat, kind, trace=trace)


def select_ester(subspaces: SvdSubspaces, s_max: int | None = None, *, trace=None) -> SelectionResult:
    return _select_criterion(subspaces, "ester", s_max, trace)


def select_samos(subspaces: SvdSubspaces, s_max: int | None = None, *, trace=None) -> SelectionResult:
    return _select_criterion(subspaces, "samos", s_max, trace)


def select_constrained(
    subspaces: SvdSubspaces,
    tau: float,
    criterion: str = "samos",
    s_max: int | None = None,
    *,
    trace: CriterionTrace | None = None,
) -> SelectionResult:
    """Minimise a shift-invariance cost over orders no smaller than the noise-bound count.

    ``s_star`` singular values exceed ``tau``; since ``tau`` bounds the noise
    norm, the order is searched in ``[s_star, s_max]``. ``s_star = 0`` means
    nothing rises above the noise and the result is order 0.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}; choose from {CRITERIA}")
    s_max = default_s_max(subspaces.m) if s_max is None else s_max
    s_star = count_above(subspaces.singular_values, tau)
    if s_star == 0:
        return SelectionResult(0, "constrained", trace=trace, s_star=0, tau_used=float(tau))
    if s_star > s_max:
        raise OrderSelectionError(
            f"{s_star} singular values exceed tau={tau:.6g} but s_max={s_max}; increase s_max"
        )
    if trace is None:
        trace = criterion_trace(subspaces, criterion, s_max)
    elif trace.kind != criterion or trace.costs.size < s_max:
        raise ValueError("precomputed trace does not match criterion or s_max")
    try:
        r_hat = CriterionTrace(trace.costs[:s_max], trace.kind).argmin(lower=s_star)
    except DegenerateCostError as exc:
        raise OrderSelectionError(str(exc)) from exc
    return SelectionResult(r_hat, "constrained", trace=trace, s_star=s_star, tau_used=float(tau))
