"""scikit-learn style wrappers around the order-selection rules.

Each estimator is fitted on one signal (a 1-D complex array) and exposes the
selected order as ``order_``. ``predict`` takes one signal or a 2-D batch
(one signal per row) and returns one order per signal, so the estimators
can be cloned, grid-searched over their parameters and used in pipelines.

>>> from hankelorder import ConstrainedOrderEstimator, preset, synthesize
>>> est = ConstrainedOrderEstimator(eta=0.0).fit(synthesize(preset(4)))
>>> est.order_
6
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, clone
from sklearn.utils.validation import check_is_fitted

from . import thresholds
from ._validation import check_noise_level, check_probability, check_signal, check_signals
from .criteria import CRITERIA, default_s_max
from .hankel import HankelShape, hankel, svd_subspaces
from .selectors import select_constrained, select_ester, select_samos, select_threshold


class _HankelOrderEstimator(BaseEstimator):
    """Shared Hankel construction; subclasses implement ``_select``."""

    def _shape(self, length):
        if self.n_rows is None:
            return HankelShape.square(length)
        if not 2 <= self.n_rows <= length:
            raise ValueError(f"n_rows must lie in [2, {length}], got {self.n_rows}")
        return HankelShape(self.n_rows, length - self.n_rows + 1)

    def _s_max(self, shape):
        return default_s_max(shape.m) if self.s_max is None else self.s_max

    def fit(self, X, y=None):
        """Select the order of signal ``X``; ``y`` is ignored."""
        signal = check_signal(X, name="X", min_length=3)
        shape = self._shape(signal.size)
        subspaces = svd_subspaces(hankel(signal, shape))
        result = self._select(subspaces, shape)
        self.hankel_shape_ = shape
        self.singular_values_ = subspaces.singular_values
        self.result_ = result
        self.order_ = result.r_hat
        self.costs_ = None if result.trace is None else result.trace.costs
        self.tau_ = result.tau_used
        self.s_star_ = result.s_star
        return self

    def predict(self, X):
        """Selected order for each signal in ``X`` (refits per signal, no state carried over)."""
        check_is_fitted(self, "order_")
        signals = check_signals(X)
        return np.array([clone(self).fit(row).order_ for row in signals], dtype=int)


class _ThresholdMixin:
    def _tau(self, shape, default_kind):
        if self.eta is None:
            raise ValueError(f"{type(self).__name__} needs the noise level eta")
        eta = check_noise_level(self.eta, allow_zero=True)
        kind = default_kind if self.threshold is None else self.threshold
        if isinstance(kind, (int, float)) and not isinstance(kind, bool):
            if kind < 0:
                raise ValueError("an explicit threshold must be >= 0")
            return float(kind)
        return thresholds.threshold(kind, shape.m, shape.n, eta, check_probability(self.beta))


class ThresholdOrderEstimator(_ThresholdMixin, _HankelOrderEstimator):
    """Count the singular values of the Hankel matrix above a noise threshold.

    ``threshold`` is a kind name (``"gavish"``, ``"complex"``, ``"real"`` or
    the long names in :mod:`hankelorder.thresholds`) or a number used as is.
    """

    def __init__(self, eta=None, threshold="gavish", beta=thresholds.DEFAULT_BETA, n_rows=None):
        self.eta = eta
        self.threshold = threshold
        self.beta = beta
        self.n_rows = n_rows

    def _select(self, subspaces, shape):
        return select_threshold(subspaces.singular_values, self._tau(shape, thresholds.GAVISH))


class EsterOrderEstimator(_HankelOrderEstimator):
    def __init__(self, n_rows=None, s_max=None):
        self.n_rows = n_rows
        self.s_max = s_max

    def _select(self, subspaces, shape):
        return select_ester(subspaces, self._s_max(shape))


class SamosOrderEstimator(_HankelOrderEstimator):
    def __init__(self, n_rows=None, s_max=None):
        self.n_rows = n_rows
        self.s_max = s_max

    def _select(self, subspaces, shape):
        return select_samos(subspaces, self._s_max(shape))


class ConstrainedOrderEstimator(_ThresholdMixin, _HankelOrderEstimator):
    """Minimise ESTER or SAMOS over orders at least the count of singular values above a noise bound.

    With the default ``threshold="complex"`` the bound holds with probability
    ``beta`` for complex white Gaussian noise of level ``eta``; use
    ``"real"`` for real noise.
    """

    def __init__(self, eta=None, criterion="samos", threshold="complex", beta=thresholds.DEFAULT_BETA,
                 n_rows=None, s_max=None):
        self.eta = eta
        self.criterion = criterion
        self.threshold = threshold
        self.beta = beta
        self.n_rows = n_rows
        self.s_max = s_max

    def _select(self, subspaces, shape):
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}, got {self.criterion!r}")
        tau = self._tau(shape, thresholds.COMPLEX_HANKEL)
        return select_constrained(subspaces, tau, self.criterion, self._s_max(shape))
