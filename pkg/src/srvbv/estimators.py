"""scikit-learn wrappers around the functional API."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_curves
from .curve import constant_speed, length
from .gtransform import g_transform
from .matching import GridConfig, shape_distance
from .relax import d_hat
from .srvt import distance, scale_invariant_distance

METRICS = ("param", "relaxed", "scale", "shape")


class GTransformer(TransformerMixin, BaseEstimator):
    """Map curves with jumps to continuous curves by opening each jump into a ramp."""

    def __init__(self, constant_speed=False):
        self.constant_speed = constant_speed

    def fit(self, X, y=None):
        self.n_curves_in_ = len(check_curves(X))
        return self

    def transform(self, X):
        check_is_fitted(self, "n_curves_in_")
        out = [g_transform(c) for c in check_curves(X)]
        if self.constant_speed:
            out = [constant_speed(g) for g in out]
        return out


class SRVDistance(TransformerMixin, BaseEstimator):
    """Distances from each input curve to the curves seen in ``fit``.

    ``transform`` returns an ``(n_samples, n_references)`` matrix, usable as a
    precomputed metric downstream.  Distances are rooted unless ``squared``.
    """

    def __init__(self, metric="relaxed", grid=17, window=8, refine_rounds=1, squared=False):
        self.metric = metric
        self.grid = grid
        self.window = window
        self.refine_rounds = refine_rounds
        self.squared = squared

    def _pair(self, a, b) -> float:
        if self.metric == "param":
            d = distance(a, b)
            return d * d if self.squared else d
        if self.metric == "scale":
            d = scale_invariant_distance(a, b)
            return d * d if self.squared else d
        if self.metric == "relaxed":
            return d_hat(a, b, rooted=not self.squared)
        m = shape_distance(a, b, self._cfg)
        return m.d_shape if self.squared else m.d_shape_rooted

    def fit(self, X, y=None):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        self.references_ = check_curves(X)
        self.reference_lengths_ = np.array([length(c) for c in self.references_])
        self._cfg = GridConfig(n1=self.grid, n2=self.grid, window=self.window, refine_rounds=self.refine_rounds)
        return self

    def transform(self, X):
        check_is_fitted(self, "references_")
        curves = check_curves(X)
        return np.array([[self._pair(c, r) for r in self.references_] for c in curves])
