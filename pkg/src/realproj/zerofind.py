"""Zeros of finite exponential sums in rectangles by the argument principle.

Winding numbers come from phase unwrapping along the boundary.  A boundary
segment ``[z0, z1]`` of length ``l`` is accepted only when a bound ``D`` on
``|f(z) - f(z0)|`` over the segment satisfies ``D < 0.9 min(|f(z0)|, |f(z1)|)``,
where ``D`` is the smaller of ``sup|f'| l`` and ``|f'(z0)| l + sup|f''| l^2 / 2``.
Then ``f`` stays inside a disk around ``f(z0)`` that misses the origin, so
the principal argument increment between the endpoints is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

from .core import ExponentialSum, RSetResult, Tolerances, VerticalStrip
from .probe import eval_df_many, eval_f_many
from .rset import compute_rset

__all__ = [
    "Rectangle",
    "ZeroRecord",
    "ZeroSearch",
    "ClearanceError",
    "CrosscheckReport",
    "winding_number",
    "locate_zeros",
    "zero_free_bounds",
    "crosscheck_rset",
]

DEFAULT_TOL = Tolerances()
CLEARANCE = 1e-13
RETRY_FACTORS = (3.0, 7.0, 13.0)
SPLIT_SCHEDULE = ((0.5, 0.5), (0.45, 0.55), (0.55, 0.45), (0.4, 0.62), (0.61, 0.38),
                  (0.3, 0.7), (0.7, 0.33))


class ClearanceError(ArithmeticError):
    """A zero sits on or too close to the boundary of a rectangle."""


@dataclass(frozen=True)
class Rectangle:
    sigma_lo: float
    sigma_hi: float
    t_lo: float
    t_hi: float

    def __post_init__(self):
        vals = (self.sigma_lo, self.sigma_hi, self.t_lo, self.t_hi)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("rectangle bounds must be finite")
        if not (self.sigma_lo < self.sigma_hi and self.t_lo < self.t_hi):
            raise ValueError(f"degenerate rectangle {vals}")

    @property
    def width(self) -> float:
        return self.sigma_hi - self.sigma_lo

    @property
    def height(self) -> float:
        return self.t_hi - self.t_lo

    @property
    def center(self) -> complex:
        return complex(0.5 * (self.sigma_lo + self.sigma_hi), 0.5 * (self.t_lo + self.t_hi))

    def corners(self) -> tuple[complex, complex, complex, complex]:
        """Counterclockwise from the lower-left corner."""
        return (complex(self.sigma_lo, self.t_lo), complex(self.sigma_hi, self.t_lo),
                complex(self.sigma_hi, self.t_hi), complex(self.sigma_lo, self.t_hi))

    def grown(self, d: float) -> "Rectangle":
        return Rectangle(self.sigma_lo - d, self.sigma_hi + d, self.t_lo - d, self.t_hi + d)

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (self.sigma_lo - slack <= z.real <= self.sigma_hi + slack
                and self.t_lo - slack <= z.imag <= self.t_hi + slack)


@dataclass(frozen=True)
class ZeroRecord:
    location: complex
    multiplicity: int
    residual: float
    box_width: float


@dataclass(frozen=True)
class ZeroSearch:
    """Zeros found in ``rect`` (possibly grown slightly to clear its boundary)."""

    zeros: tuple[ZeroRecord, ...]
    complete: bool
    rect: Rectangle
    total_winding: int
    boxes: int

    def __iter__(self) -> Iterator[ZeroRecord]:
        return iter(self.zeros)

    def __len__(self) -> int:
        return len(self.zeros)

    def __getitem__(self, i):
        return self.zeros[i]


class _Tracker:
    """Cached boundary bookkeeping for one sum."""

    def __init__(self, f: ExponentialSum, tol: Tolerances):
        if not len(f):
            raise ValueError("empty sum")
        self.sum = f
        self.tol = tol
        self.lam = np.array(f.exponents)
        self.log_abs = np.array(f.log_abs)
        with np.errstate(divide="ignore"):
            self.log_dabs = self.log_abs + np.log(np.abs(self.lam))
            self.log_d2abs = self.log_abs + 2.0 * np.log(np.abs(self.lam))
        span = float(self.lam.max() - self.lam.min())
        self.density = max(span, 1e-3)
        self.edges: dict[tuple, float] = {}
        self.evals = 0

    def total(self, sigma: np.ndarray) -> np.ndarray:
        return np.exp(self.log_abs[None, :] + np.outer(sigma, self.lam)).sum(axis=1)

    def f(self, z: np.ndarray) -> np.ndarray:
        self.evals += len(z)
        return eval_f_many(self.sum, z)

    def _sup_bound(self, log_w: np.ndarray, sa: np.ndarray, sb: np.ndarray) -> np.ndarray:
        """``sum_j exp(log_w_j + lambda_j sigma)`` maximized over ``sigma`` in ``[sa, sb]``."""
        lo, hi = np.minimum(sa, sb), np.maximum(sa, sb)
        at = np.where(self.lam[None, :] > 0, hi[:, None], lo[:, None])
        return np.exp(log_w[None, :] + at * self.lam[None, :]).sum(axis=1)

    def _change_bound(self, z: np.ndarray, d: np.ndarray) -> np.ndarray:
        """Bound on ``|f(z) - f(z_i)|`` over each segment ``[z_i, z_{i+1}]``."""
        seg = np.abs(z[1:] - z[:-1])
        sa, sb = z[:-1].real, z[1:].real
        crude = self._sup_bound(self.log_dabs, sa, sb) * seg
        taylor = np.abs(d[:-1]) * seg + 0.5 * self._sup_bound(self.log_d2abs, sa, sb) * seg ** 2
        return np.minimum(crude, taylor)

    def df(self, z: np.ndarray) -> np.ndarray:
        return eval_df_many(self.sum, z)

    def _clear(self, z: np.ndarray, v: np.ndarray) -> None:
        bad = np.abs(v) <= CLEARANCE * self.total(z.real)
        if bad.any():
            raise ClearanceError(f"|f| too small near {complex(z[np.argmax(bad)])!r}")

    def edge_delta(self, z0: complex, z1: complex) -> float:
        """Exact argument increment of ``f`` along the segment ``z0 -> z1``."""
        if (z1.real, z1.imag) < (z0.real, z0.imag):
            return -self.edge_delta(z1, z0)
        key = (z0, z1)
        if key in self.edges:
            return self.edges[key]
        length = abs(z1 - z0)
        n0 = int(min(max(2, math.ceil(2.0 * length * self.density) + 1), 200_000))
        u = np.linspace(0.0, 1.0, n0 + 1)
        z = z0 + u * (z1 - z0)
        v = self.f(z)
        self._clear(z, v)
        d = self.df(z)
        for _ in range(80):
            mod = np.abs(v)
            bad = self._change_bound(z, d) >= 0.9 * np.minimum(mod[:-1], mod[1:])
            if not bad.any():
                break
            seg = np.abs(z[1:] - z[:-1])
            if len(z) > 1_000_000 or (seg[bad] < 1e-15 * max(1.0, abs(z0))).any():
                raise ClearanceError(f"boundary segment near {z0!r} cannot be resolved")
            idx = np.flatnonzero(bad)
            mid_u = 0.5 * (u[idx] + u[idx + 1])
            mid_z = z0 + mid_u * (z1 - z0)
            mid_v = self.f(mid_z)
            self._clear(mid_z, mid_v)
            u = np.insert(u, idx + 1, mid_u)
            z = np.insert(z, idx + 1, mid_z)
            v = np.insert(v, idx + 1, mid_v)
            d = np.insert(d, idx + 1, self.df(mid_z))
        else:
            raise ClearanceError(f"boundary segment near {z0!r} cannot be resolved")
        delta = float(np.angle(v[1:] / v[:-1]).sum())
        self.edges[key] = delta
        return delta

    def winding(self, rect: Rectangle) -> int:
        c = rect.corners()
        total = sum(self.edge_delta(c[i], c[(i + 1) % 4]) for i in range(4))
        turns = total / (2.0 * math.pi)
        n = round(turns)
        if abs(turns - n) > 1e-6:
            raise ClearanceError(f"winding {turns!r} is not an integer")
        return int(n)

    def winding_with_retry(self, rect: Rectangle) -> tuple[int, Rectangle]:
        try:
            return self.winding(rect), rect
        except ClearanceError as err:
            last = err
        for k in RETRY_FACTORS:
            grown = rect.grown(k * self.tol.root_tol)
            try:
                return self.winding(grown), grown
            except ClearanceError as err:
                last = err
        raise ClearanceError(f"no clear boundary for {rect}: {last}")

    def newton(self, z: complex, box: Rectangle) -> tuple[complex, float]:
        """Damped Newton kept inside ``box`` grown by its own size."""
        f = self.f
        fence = box.grown(max(box.width, box.height))
        val = complex(f(np.array([z]))[0])
        for _ in range(40):
            d = complex(eval_df_many(self.sum, np.array([z]))[0])
            if val == 0 or d == 0:
                break
            step = val / d
            for _ in range(30):
                cand = z - step
                if fence.contains(cand):
                    cv = complex(f(np.array([cand]))[0])
                    if abs(cv) <= abs(val):
                        break
                step *= 0.5
            else:
                break
            z, val = cand, cv
            if abs(step) <= 4e-16 * max(1.0, abs(z)):
                break
        return z, abs(val)


def winding_number(f: ExponentialSum, rect: Rectangle, tol: Tolerances = DEFAULT_TOL) -> int:
    """Number of zeros (with multiplicity) inside ``rect``.

    When a zero sits too close to the boundary the rectangle is grown by
    3, 7 and 13 times ``root_tol`` in turn; :class:`ClearanceError` is raised
    when all of these fail.
    """
    return _Tracker(f, tol).winding_with_retry(rect)[0]


def _split(box: Rectangle, a: float, b: float) -> list[Rectangle]:
    if box.width > 2.0 * box.height:
        s = box.sigma_lo + a * box.width
        return [Rectangle(box.sigma_lo, s, box.t_lo, box.t_hi),
                Rectangle(s, box.sigma_hi, box.t_lo, box.t_hi)]
    if box.height > 2.0 * box.width:
        t = box.t_lo + b * box.height
        return [Rectangle(box.sigma_lo, box.sigma_hi, box.t_lo, t),
                Rectangle(box.sigma_lo, box.sigma_hi, t, box.t_hi)]
    s = box.sigma_lo + a * box.width
    t = box.t_lo + b * box.height
    return [Rectangle(box.sigma_lo, s, box.t_lo, t), Rectangle(s, box.sigma_hi, box.t_lo, t),
            Rectangle(box.sigma_lo, s, t, box.t_hi), Rectangle(s, box.sigma_hi, t, box.t_hi)]


def _residual_ok(tr: _Tracker, z: complex, residual: float) -> bool:
    return residual <= tr.tol.zero_residual * max(1.0, float(tr.total(np.array([z.real]))[0]))


def locate_zeros(f: ExponentialSum, rect: Rectangle, tol: Tolerances = DEFAULT_TOL) -> ZeroSearch:
    """All zeros in ``rect`` by adaptive subdivision plus Newton polishing.

    A box of winding 1 is polished by damped Newton from its center; the
    result is accepted once a ``root_tol``-wide box around it has winding 1.
    Boxes that cannot be split further are reported as clusters with
    multiplicity equal to their winding.  Output is sorted by height, then
    by real part.
    """
    tr = _Tracker(f, tol)
    n_top, top = tr.winding_with_retry(rect)
    found: list[ZeroRecord] = []
    stack: list[tuple[Rectangle, int]] = [(top, n_top)] if n_top else []
    boxes = 0
    complete = True
    rt = tol.root_tol
    while stack:
        box, n = stack.pop()
        boxes += 1
        if boxes > tol.max_boxes:
            complete = False
            break
        if n == 1:
            z, res = tr.newton(box.center, box)
            if box.contains(z, rt) and _residual_ok(tr, z, res):
                tiny = Rectangle(z.real - rt / 2, z.real + rt / 2, z.imag - rt / 2, z.imag + rt / 2)
                try:
                    m, used = tr.winding_with_retry(tiny)
                except ClearanceError:
                    m = 0
                if m == 1:
                    found.append(ZeroRecord(z, 1, res, used.width))
                    continue
        if max(box.width, box.height) <= rt:
            found.append(_cluster(tr, box, n))
            continue
        for a, b in SPLIT_SCHEDULE:
            kids = _split(box, a, b)
            try:
                counts = [tr.winding(k) for k in kids]
            except ClearanceError:
                continue
            if sum(counts) == n:
                stack.extend((k, c) for k, c in zip(kids, counts) if c)
                break
        else:
            found.append(_cluster(tr, box, n))
    found.sort(key=lambda r: (r.location.imag, r.location.real))
    return ZeroSearch(tuple(found), complete, top, n_top, boxes)


def _cluster(tr: _Tracker, box: Rectangle, n: int) -> ZeroRecord:
    z = box.center
    if n == 1:
        zn, res = tr.newton(z, box)
        if box.contains(zn):
            return ZeroRecord(zn, 1, res, max(box.width, box.height))
    res = float(abs(tr.f(np.array([z]))[0]))
    return ZeroRecord(z, n, res, max(box.width, box.height))


def zero_free_bounds(f: ExponentialSum) -> tuple[float, float]:
    """Real interval outside of which a single term dominates the others.

    Right of the upper bound the largest exponent's term exceeds the sum of
    the other moduli; left of the lower bound the smallest one does.
    """
    lam, la = f.exponents, f.log_abs
    if len(lam) < 2:
        return 0.0, 0.0
    rest_hi = math.log(math.fsum(math.exp(x - la[-1]) for x in la[:-1]))
    rest_lo = math.log(math.fsum(math.exp(x - la[0]) for x in la[1:]))
    hi = max(0.0, rest_hi / (lam[-1] - lam[-2]))
    lo = min(0.0, -rest_lo / (lam[1] - lam[0]))
    return lo, hi


@dataclass(frozen=True)
class CrosscheckReport:
    rset: RSetResult
    zeros: tuple[ZeroRecord, ...]
    complete: bool
    violations: tuple[tuple[complex, float], ...]
    max_violation: float
    density: tuple[tuple[float, float], ...]
    histogram: tuple[tuple[int, ...], tuple[float, ...]] = field(default=((), ()))

    @property
    def sound(self) -> bool:
        return not self.violations


def crosscheck_rset(f: ExponentialSum, strip: VerticalStrip, t_max: float,
                    tol: Tolerances = DEFAULT_TOL, density_points: int = 21,
                    rset: Optional[RSetResult] = None) -> CrosscheckReport:
    """Compare computed real projections of zeros with the interval set.

    Soundness: each zero found in ``strip x [0, t_max]`` must lie within
    ``root_tol`` of the set.  Density: for interior grid points of the set,
    the distance to the nearest zero projection is recorded.
    """
    if f.tail is not None:
        raise ValueError("crosscheck needs a finite sum")
    if rset is None:
        rset = compute_rset(f, strip, tol)
    lo, hi = zero_free_bounds(f)
    s_lo, s_hi = max(strip.alpha, lo - 0.5), min(strip.beta, hi + 0.5)
    zeros: Sequence[ZeroRecord] = ()
    complete = True
    if s_lo < s_hi and len(f) >= 2:
        search = locate_zeros(f, Rectangle(s_lo, s_hi, 0.0, t_max), tol)
        zeros = tuple(z for z in search.zeros if strip.contains(z.location.real))
        complete = search.complete
    violations = []
    worst = 0.0
    for z in zeros:
        d = rset.distance(z.location.real)
        worst = max(worst, d)
        if d > tol.root_tol:
            violations.append((z.location, d))
    proj = np.array(sorted(z.location.real for z in zeros))
    density = []
    for iv in rset.intervals:
        if not (math.isfinite(iv.lo) and math.isfinite(iv.hi)):
            continue
        if iv.width <= 0:
            pts = [iv.lo]
        else:
            pts = list(np.linspace(iv.lo, iv.hi, density_points + 2)[1:-1])
        for s in pts:
            d = float(np.abs(proj - s).min()) if len(proj) else math.inf
            density.append((float(s), d))
    finite = [d for _, d in density if math.isfinite(d)]
    if finite:
        counts, edges = np.histogram(finite, bins=10)
        hist = (tuple(int(c) for c in counts), tuple(float(e) for e in edges))
    else:
        hist = ((), ())
    return CrosscheckReport(rset, tuple(zeros), complete, tuple(violations), worst,
                            tuple(density), hist)
