"""Hankel matrices, their left singular subspaces and subspace geometry."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import linalg

from ._validation import check_matrix, check_positive_int, check_signal


@dataclass(frozen=True)
class HankelShape:
    m: int
    n: int

    def __post_init__(self):
        check_positive_int(self.m, name="m", minimum=2)
        check_positive_int(self.n, name="n")

    @property
    def length(self) -> int:
        return self.m + self.n - 1

    @classmethod
    def square(cls, length: int) -> "HankelShape":
        """Most nearly square shape for a record of ``length`` samples."""
        m = (length + 1) // 2
        return cls(m, length - m + 1)


def hankel(v, shape: HankelShape | None = None) -> np.ndarray:
    """Matrix with entries ``H[i, j] = v[i + j]``."""
    v = check_signal(v, name="v")
    shape = HankelShape.square(v.size) if shape is None else shape
    if v.size != shape.length:
        raise ValueError(f"need m + n - 1 = {shape.length} samples, got {v.size}")
    return linalg.hankel(v[: shape.m], v[shape.m - 1 :])


@dataclass(frozen=True)
class SvdSubspaces:
    left_basis: np.ndarray
    singular_values: np.ndarray
    right_basis: np.ndarray | None = None

    @property
    def m(self) -> int:
        return self.left_basis.shape[0]

    @property
    def rank_bound(self) -> int:
        return self.left_basis.shape[1]

    def leading(self, s: int) -> np.ndarray:
        return self.left_basis[:, :s]


def svd_subspaces(H) -> SvdSubspaces:
    """Economy SVD ``H = Q diag(sigma) P^H`` with a fixed phase convention.

    Each left singular vector is rotated so its largest-magnitude entry is
    real and positive; the matching right vector absorbs the same phase.
    """
    H = check_matrix(H, name="H")
    try:
        Q, sigma, Ph = linalg.svd(H, full_matrices=False, lapack_driver="gesdd")
    except linalg.LinAlgError:
        try:
            Q, sigma, Ph = linalg.svd(H, full_matrices=False, lapack_driver="gesvd")
        except linalg.LinAlgError as exc:
            raise linalg.LinAlgError(f"SVD did not converge: {exc}") from exc
    pivot = Q[np.argmax(np.abs(Q), axis=0), np.arange(Q.shape[1])]
    phase = np.where(pivot == 0, 1.0, pivot / np.where(pivot == 0, 1.0, np.abs(pivot)))
    Q = Q * phase.conj()
    P = Ph.conj().T * phase.conj()
    return SvdSubspaces(Q, sigma, P)


@dataclass(frozen=True)
class ShiftPair:
    top_removed: np.ndarray
    bottom_removed: np.ndarray


def shift_pair(subspaces: SvdSubspaces, s: int) -> ShiftPair:
    """Row-shifted blocks of the leading ``s`` left singular vectors.

    ``top_removed`` drops the first row, ``bottom_removed`` drops the last.
    """
    m, k = subspaces.left_basis.shape
    if m < 2:
        raise ValueError("shift blocks need at least two rows")
    if not 1 <= s <= k:
        raise ValueError(f"s must lie in [1, {k}], got {s}")
    U = subspaces.left_basis[:, :s]
    return ShiftPair(U[1:], U[:-1])


def _orthonormal_basis(X, name):
    X = check_matrix(X, name=name)
    if X.shape[0] < X.shape[1]:
        raise ValueError(f"{name} has more columns than rows")
    U, sv, _ = linalg.svd(X, full_matrices=False)
    tol = max(X.shape) * np.finfo(float).eps * (sv[0] if sv.size else 0.0)
    if sv.size == 0 or sv[-1] <= tol:
        raise np.linalg.LinAlgError(f"{name} is rank deficient")
    return U


def principal_angles(X, Y) -> np.ndarray:
    """Principal angles between the column spaces of ``X`` and ``Y``, largest first."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[1] != Y.shape[1]:
        raise ValueError("X and Y must be matrices with the same number of columns")
    if X.shape[0] != Y.shape[0]:
        raise ValueError("X and Y must live in the same ambient space")
    Xo = _orthonormal_basis(X, "X")
    Yo = _orthonormal_basis(Y, "Y")
    cosines = np.clip(linalg.svdvals(Xo.conj().T @ Yo), 0.0, 1.0)
    return np.sort(np.arccos(cosines))[::-1]


def projector(X) -> np.ndarray:
    Xo = _orthonormal_basis(X, "X")
    return Xo @ Xo.conj().T


def gap_distance(X, Y) -> float:
    """Spectral norm of the difference of the orthogonal projectors onto ``X`` and ``Y``."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.ndim != 2 or Y.ndim != 2 or X.shape[1] != Y.shape[1]:
        raise ValueError("X and Y must be matrices with the same number of columns")
    return float(linalg.norm(projector(X) - projector(Y), 2))


def nearest_orthonormal(A) -> np.ndarray:
    """Unitary factor of the polar decomposition of ``A``."""
    A = check_matrix(A, name="A")
    if A.shape[0] < A.shape[1]:
        raise ValueError("A must have at least as many rows as columns")
    W, zeta, Vh = linalg.svd(A, full_matrices=False)
    if zeta[-1] <= max(A.shape) * np.finfo(float).eps * zeta[0]:
        raise np.linalg.LinAlgError("A is rank deficient")
    return W @ Vh


def spectral_norm(A) -> float:
    return float(linalg.svdvals(A)[0])
