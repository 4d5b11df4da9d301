"""Shift-invariance costs (ESTER, SAMOS) over candidate orders and their angle bounds."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from .hankel import SvdSubspaces, principal_angles, shift_pair

ESTER = "ester"
SAMOS = "samos"
CRITERIA = (ESTER, SAMOS)

# relative cutoff below which a singular value of the bottom block counts as zero
PINV_RTOL = 1e-10


class DegenerateCostError(ArithmeticError):
    """The shifted block is rank deficient at this candidate order."""


@dataclass(frozen=True)
class CriterionTrace:
    costs: np.ndarray
    kind: str

    @property
    def orders(self) -> np.ndarray:
        return np.arange(1, self.costs.size + 1)

    def argmin(self, lower: int = 1) -> int:
        """Smallest order in ``[lower, s_max]`` attaining the minimum finite cost."""
        window = self.costs[lower - 1 :]
        finite = np.isfinite(window)
        if not finite.any():
            raise DegenerateCostError(f"every {self.kind} cost from s={lower} on is degenerate")
        best = np.min(window[finite])
        return lower + int(np.flatnonzero(finite & (window == best))[0])


def default_s_max(m: int) -> int:
    return max((m - 1) // 2, 1)


def _check_order(subspaces: SvdSubspaces, s: int, s_max: int | None = None):
    limit = min(subspaces.rank_bound, subspaces.m - 1)
    if s_max is not None:
        limit = min(limit, s_max)
    if not 1 <= s <= limit:
        raise ValueError(f"candidate order s={s} outside [1, {limit}]")


def ester_cost(subspaces: SvdSubspaces, s: int) -> float:
    """``|| Q_f - Q_l pinv(Q_l) Q_f ||_2`` on the leading ``s`` singular vectors."""
    _check_order(subspaces, s)
    pair = shift_pair(subspaces, s)
    Qf, Ql = pair.top_removed, pair.bottom_removed
    W, sv, Vh = linalg.svd(Ql, full_matrices=False)
    if sv[-1] <= PINV_RTOL * sv[0]:
        raise DegenerateCostError(f"bottom shift block is rank deficient at s={s}")
    # Q_l pinv(Q_l) is the projector W W^H
    residual = Qf - W @ (W.conj().T @ Qf)
    return float(linalg.svdvals(residual)[0])


def samos_cost(subspaces: SvdSubspaces, s: int) -> float:
    """Mean of the ``s`` smallest singular values of ``[Q_f  Q_l]``."""
    if 2 * s > subspaces.m - 1:
        raise ValueError(f"SAMOS needs 2s <= m - 1, got s={s}, m={subspaces.m}")
    _check_order(subspaces, s)
    pair = shift_pair(subspaces, s)
    aug = np.hstack([pair.top_removed, pair.bottom_removed])
    sv = linalg.svdvals(aug)
    return float(np.sum(sv[s : 2 * s]) / s)


def block_angles(subspaces: SvdSubspaces, s: int) -> np.ndarray:
    pair = shift_pair(subspaces, s)
    return principal_angles(pair.top_removed, pair.bottom_removed)


def ester_bound(subspaces: SvdSubspaces, s: int) -> float:
    """Sine of the largest principal angle between the shifted blocks."""
    return float(np.sin(block_angles(subspaces, s)[0]))


def samos_bound(subspaces: SvdSubspaces, s: int) -> float:
    angles = block_angles(subspaces, s)
    return float(np.sqrt(2) * (1 + np.mean(np.sin(angles / 2))))


def samos_angle_term(subspaces: SvdSubspaces, s: int) -> float:
    """``(sqrt(2)/s) sum_i sin(theta_i / 2)``, the SAMOS cost of the orthonormalised blocks."""
    angles = block_angles(subspaces, s)
    return float(np.sqrt(2) * np.mean(np.sin(angles / 2)))


_COSTS = {ESTER: ester_cost, SAMOS: samos_cost}


def criterion_trace(subspaces: SvdSubspaces, kind: str, s_max: int | None = None) -> CriterionTrace:
    """Cost for every candidate order ``1..s_max``; degenerate orders get ``+inf``."""
    if kind not in _COSTS:
        raise ValueError(f"unknown criterion {kind!r}; choose from {CRITERIA}")
    s_max = default_s_max(subspaces.m) if s_max is None else s_max
    if s_max < 1:
        raise ValueError(f"s_max must be >= 1, got {s_max}")
    cost = _COSTS[kind]
    costs = np.empty(s_max)
    for s in range(1, s_max + 1):
        try:
            costs[s - 1] = cost(subspaces, s)
        except DegenerateCostError:
            costs[s - 1] = np.inf
    return CriterionTrace(costs, kind)
