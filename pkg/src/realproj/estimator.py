"""scikit-learn style wrappers around the set computation and the zero locator."""

from __future__ import annotations

import math
from typing import Any

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .core import Tolerances, VerticalStrip, validate_sum
from .rset import b_values, compute_rset, inf_modulus
from .zerofind import Rectangle, locate_zeros

__all__ = ["RealProjectionSet", "ZeroLocator"]


def _as_sigmas(X: Any) -> np.ndarray:
    arr = check_array(X, ensure_2d=False, dtype=float)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected a single column of sigma values, got shape {arr.shape}")
        arr = arr[:, 0]
    return arr


class RealProjectionSet(BaseEstimator):
    """Closure of the real parts of the zeros of an exponential sum.

    ``fit`` takes the sum (an :class:`ExponentialSum` or anything
    :func:`validate_sum` accepts); ``predict`` then tells whether each
    ``sigma`` lies in the set, and ``transform`` returns the profile
    ``[inf_modulus, B_1, ..., B_k]`` at each ``sigma``.
    """

    def __init__(self, alpha: float = -math.inf, beta: float = math.inf,
                 root_tol: float = 1e-9, cert_margin: float = 1e-12):
        self.alpha = alpha
        self.beta = beta
        self.root_tol = root_tol
        self.cert_margin = cert_margin

    def _tol(self) -> Tolerances:
        return Tolerances(root_tol=self.root_tol, cert_margin=self.cert_margin)

    def fit(self, X, y=None):
        self.sum_ = validate_sum(X)
        self.strip_ = VerticalStrip(self.alpha, self.beta)
        self.result_ = compute_rset(self.sum_, self.strip_, self._tol())
        self.intervals_ = np.array([[iv.lo, iv.hi] for iv in self.result_.intervals],
                                   dtype=float).reshape(-1, 2)
        self.certified_ = self.result_.certified
        self.n_terms_ = len(self.sum_)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        sig = _as_sigmas(X)
        return np.array([self.result_.contains(float(s)) for s in sig], dtype=bool)

    def decision_function(self, X) -> np.ndarray:
        """``min_j B_j(sigma)``: nonnegative exactly on the set."""
        check_is_fitted(self, "result_")
        sig = _as_sigmas(X)
        if self.n_terms_ < 2:
            return np.full(len(sig), -1.0)
        return np.array([min(v.lo for v in b_values(self.sum_, float(s))) for s in sig])

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        sig = _as_sigmas(X)
        out = np.empty((len(sig), 1 + self.n_terms_))
        for i, s in enumerate(sig):
            out[i, 0] = inf_modulus(self.sum_, float(s))
            out[i, 1:] = [v.lo for v in b_values(self.sum_, float(s))]
        return out

    def fit_transform(self, X, y=None, *, sigma=None) -> np.ndarray:
        if sigma is None:
            raise ValueError("fit_transform needs the sigma grid as 'sigma'")
        return self.fit(X).transform(sigma)


class ZeroLocator(BaseEstimator):
    """Zeros of a finite exponential sum inside a rectangle."""

    def __init__(self, sigma_lo: float = -1.0, sigma_hi: float = 1.0, t_lo: float = 0.0,
                 t_hi: float = 50.0, root_tol: float = 1e-9):
        self.sigma_lo = sigma_lo
        self.sigma_hi = sigma_hi
        self.t_lo = t_lo
        self.t_hi = t_hi
        self.root_tol = root_tol

    def fit(self, X, y=None):
        f = validate_sum(X)
        rect = Rectangle(self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi)
        found = locate_zeros(f, rect, Tolerances(root_tol=self.root_tol))
        self.zeros_ = np.array([z.location for z in found], dtype=complex)
        self.multiplicities_ = np.array([z.multiplicity for z in found], dtype=int)
        self.complete_ = found.complete
        self.rect_ = found.rect
        return self

    def predict(self, X) -> np.ndarray:
        """Distance from each ``sigma`` to the nearest zero's real part."""
        check_is_fitted(self, "zeros_")
        sig = _as_sigmas(X)
        if not len(self.zeros_):
            return np.full(len(sig), np.inf)
        return np.abs(sig[:, None] - self.zeros_.real[None, :]).min(axis=1)
