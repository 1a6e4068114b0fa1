"""Certified computation of the closure set of real parts of zeros.

For a sum ``f(s) = sum_j a_j exp(lambda_j s)`` write ``m_j(sigma) =
|a_j| exp(lambda_j sigma)`` and

    B_j(sigma) = sum_{i != j} m_i / m_j - 1.

With rationally independent exponents, ``sigma`` is the real part of a
limit of zeros exactly when ``B_j(sigma) >= 0`` for every ``j``, so the
set is the strip minus the open sets ``{B_j < 0}``.  Each ``B_j`` is a
positive combination of exponentials minus one, hence convex, and has at
most two roots.  Internally we work with ``h_j = log(1 + B_j)``, a
log-sum-exp of affine functions: same sign and roots, convex, and free of
overflow.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .basis import independence_status
from .core import (
    EndKind,
    ExponentialSum,
    Interval,
    RSetResult,
    SumValidationError,
    Tolerances,
    VerticalStrip,
)

__all__ = [
    "NumericalRangeError",
    "AmbiguousBoundaryError",
    "TermModuli",
    "BValue",
    "BRoot",
    "BRoots",
    "BoundaryClass",
    "NonemptyCheck",
    "EdgeConditions",
    "term_moduli",
    "b_value",
    "b_values",
    "b_profile",
    "b_roots",
    "compute_rset",
    "inf_modulus",
    "inf_modulus_bounds",
    "classify_boundary",
    "check_nonempty_entire",
    "check_edge_conditions",
]

DEFAULT_TOL = Tolerances()


class NumericalRangeError(ArithmeticError):
    """A modulus or ratio left the double range."""


class AmbiguousBoundaryError(ValueError):
    """Two or more of the equalities ``B_j = 0`` hold within the margin.

    With at least three independent exponents at most one can hold at a
    point, so this signals dependent exponents or a margin that is too
    loose.
    """

    def __init__(self, sigma: float, indices: Sequence[int]):
        self.sigma = sigma
        self.indices = tuple(indices)
        super().__init__(
            f"equalities for terms {list(self.indices)} all hold within the margin at sigma={sigma!r}")


@dataclass(frozen=True)
class TermModuli:
    sigma: float
    m: tuple[float, ...]
    total: float
    tail_epsilon: float
    log_m: tuple[float, ...] = ()


@dataclass(frozen=True)
class BValue:
    """Enclosure ``[lo, hi]`` of ``B_j(sigma)``; the tail only widens ``hi``."""

    j: int
    lo: float
    hi: float


@dataclass(frozen=True)
class BRoot:
    lo: float
    hi: float
    value: float


@dataclass(frozen=True)
class BRoots:
    """Roots of one ``B_j`` inside the strip and where it is negative.

    ``negative_interval`` is the open set ``{B_j < 0}`` (its ends are roots
    or strip edges).  ``certified`` is false when a sign had to be decided
    inside the margin.
    """

    j: int
    roots: tuple[BRoot, ...]
    negative_interval: Optional[tuple[float, float]]
    minimizer: float
    min_value: float
    certified: bool = True


@dataclass(frozen=True)
class BoundaryClass:
    kind: str  # "boundary", "interior" or "exterior"
    equality_index: Optional[int]
    values: tuple[BValue, ...] = ()


@dataclass(frozen=True)
class NonemptyCheck:
    guaranteed: bool
    witness: Optional[float]


@dataclass(frozen=True)
class EdgeConditions:
    """Sufficient conditions for non-emptiness evaluated at finite edges.

    ``None`` means not applicable (infinite edge or no valid tail bound).
    """

    cond_a: Optional[bool]
    cond_b: Optional[bool]
    implies_nonempty: bool
    edge_sums: tuple[Optional[float], Optional[float]] = (None, None)
    edge_sups: tuple[Optional[float], Optional[float]] = (None, None)


# --------------------------------------------------------------------------
# log-sum-exp of affine functions


@dataclass(frozen=True)
class _LogSumExp:
    """``h(sigma) = log sum_k exp(c_k + r_k sigma)``: convex in sigma."""

    c: np.ndarray
    r: np.ndarray

    def __call__(self, sigma: float) -> float:
        if self.c.size == 0:
            return -math.inf
        z = self.c + self.r * sigma
        top = float(z.max())
        if not math.isfinite(top):
            return top
        return top + math.log(math.fsum(np.exp(z - top)))

    def slope(self, sigma: float) -> float:
        if self.c.size == 0:
            return 0.0
        z = self.c + self.r * sigma
        w = np.exp(z - z.max())
        return float(math.fsum(w * self.r) / math.fsum(w))

    def limit(self, direction: int) -> float:
        """Limit of ``h`` as sigma goes to ``direction * infinity``."""
        if self.c.size == 0:
            return -math.inf
        d = self.r * direction
        top = d.max()
        if top > 0:
            return math.inf
        if top < 0:
            return -math.inf
        sel = self.c[d == 0]
        t = float(sel.max())
        return t + math.log(math.fsum(np.exp(sel - t)))

    def rate_limit(self, direction: int) -> float:
        """Limit of the slope as sigma goes to ``direction * infinity``."""
        return float(self.r.max() if direction > 0 else self.r.min())


def _b_function(f: ExponentialSum, j: int, *, with_tail: bool = False) -> _LogSumExp:
    la = np.array(f.log_abs)
    lam = np.array(f.exponents)
    mask = np.arange(len(f)) != j
    c = la[mask] - la[j]
    r = lam[mask] - lam[j]
    if with_tail and f.epsilon > 0:
        c = np.append(c, math.log(f.epsilon) - la[j])
        r = np.append(r, -lam[j])
    return _LogSumExp(c, r)


def _tail_dominance(f: ExponentialSum) -> Optional[_LogSumExp]:
    """``log(S_kept / epsilon)``: negative where an omitted term could dominate."""
    if f.epsilon <= 0:
        return None
    return _LogSumExp(np.array(f.log_abs) - math.log(f.epsilon), np.array(f.exponents))


def _margin_sign(h: float, margin: float) -> int:
    """Sign of ``B = expm1(h)``: +1, -1, or 0 when inside the margin."""
    if h == math.inf:
        return 1
    if h == -math.inf:
        return -1
    b = math.expm1(h)
    if b > margin:
        return 1
    if b < -margin:
        return -1
    return 0


def _outward_point(h: _LogSumExp, start: float, direction: int, want_positive: bool,
                   cap: int = 200) -> Optional[float]:
    """Step from ``start`` towards ``direction * inf`` until ``h`` has the wanted sign."""
    step = 1.0
    for _ in range(cap):
        x = start + direction * step
        v = h(x)
        if (v > 0) == want_positive and v != 0:
            return x
        step *= 2.0
        if not math.isfinite(x):
            break
    return None


def _minimize(h: _LogSumExp, alpha: float, beta: float, tol: Tolerances) -> float:
    """Minimizer of the convex ``h`` on ``[alpha, beta]`` (may be an infinite edge)."""
    if math.isfinite(alpha):
        if h.slope(alpha) >= 0:
            return alpha
    elif h.rate_limit(-1) >= 0:
        return alpha
    if math.isfinite(beta):
        if h.slope(beta) <= 0:
            return beta
    elif h.rate_limit(1) <= 0:
        return beta

    x0 = min(max(0.0, alpha), beta)
    lo = hi = x0
    if math.isfinite(alpha) and math.isfinite(beta):
        lo, hi = alpha, beta
    else:
        step = 1.0
        while h.slope(lo) > 0:
            lo = max(x0 - step, alpha) if math.isfinite(alpha) else x0 - step
            step *= 2.0
        step = 1.0
        while h.slope(hi) < 0:
            hi = min(x0 + step, beta) if math.isfinite(beta) else x0 + step
            step *= 2.0
    for _ in range(tol.max_iter):
        if hi - lo <= tol.root_tol * 1e-3:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if h.slope(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _bisect_root(h: _LogSumExp, pos: float, neg: float, tol: Tolerances) -> BRoot:
    """Root of ``h`` between a point where it is positive and one where it is negative.

    Bisection down to ``root_tol``, then safeguarded Newton polishing that
    keeps the bracket valid.
    """
    a, b = pos, neg
    for _ in range(tol.max_iter):
        if abs(b - a) <= tol.root_tol:
            break
        mid = 0.5 * (a + b)
        if mid in (a, b):
            break
        v = h(mid)
        if v > 0:
            a = mid
        elif v < 0:
            b = mid
        else:
            return BRoot(mid, mid, mid)
    x = 0.5 * (a + b)
    for _ in range(60):
        v = h(x)
        if v == 0:
            a = b = x
            break
        if v > 0:
            a = x
        else:
            b = x
        d = h.slope(x)
        nxt = x - v / d if d != 0 else 0.5 * (a + b)
        if not (min(a, b) <= nxt <= max(a, b)):
            nxt = 0.5 * (a + b)
        if nxt == x:
            break
        x = nxt
    lo, hi = min(a, b), max(a, b)
    return BRoot(lo, hi, min(max(x, lo), hi))


def _isolate(h: _LogSumExp, j: int, strip: VerticalStrip, tol: Tolerances) -> BRoots:
    alpha, beta = strip.alpha, strip.beta
    margin = tol.cert_margin
    xmin = _minimize(h, alpha, beta, tol)
    if math.isfinite(xmin):
        hmin = h(xmin)
    else:
        hmin = h.limit(1 if xmin > 0 else -1)
    sign_min = _margin_sign(hmin, margin)
    certified = True
    if hmin >= 0 or sign_min == 0:
        if sign_min == 0:
            certified = False
        roots = ()
        if hmin <= 0 and math.isfinite(xmin) and strip.contains(xmin):
            roots = (BRoot(xmin, xmin, xmin),)
        return BRoots(j, roots, None, xmin, math.expm1(hmin), certified)

    # a finite point with h < 0 to bracket roots against
    anchor = xmin
    if not math.isfinite(anchor):
        direction = 1 if anchor > 0 else -1
        start = min(max(0.0, alpha), beta) if math.isfinite(alpha) or math.isfinite(beta) else 0.0
        anchor = start if h(start) < 0 else _outward_point(h, start, direction, False)
        if anchor is None:
            return BRoots(j, (), (alpha, beta), xmin, math.expm1(hmin), False)

    roots = []
    # left side: h decreasing on (alpha, xmin]
    neg_lo = alpha
    if xmin > alpha:
        if math.isfinite(alpha):
            edge = h(alpha)
            if _margin_sign(edge, margin) == 0:
                certified = False
            pos_pt = alpha if edge > 0 else None
        else:
            pos_pt = _outward_point(h, anchor, -1, True) if h.limit(-1) > 0 else None
        if pos_pt is not None:
            root = _bisect_root(h, pos_pt, anchor, tol)
            roots.append(root)
            neg_lo = root.value
    # right side: h increasing on [xmin, beta)
    neg_hi = beta
    if xmin < beta:
        if math.isfinite(beta):
            edge = h(beta)
            if _margin_sign(edge, margin) == 0:
                certified = False
            pos_pt = beta if edge > 0 else None
        else:
            pos_pt = _outward_point(h, anchor, 1, True) if h.limit(1) > 0 else None
        if pos_pt is not None:
            root = _bisect_root(h, pos_pt, anchor, tol)
            roots.append(root)
            neg_hi = root.value
    return BRoots(j, tuple(roots), (neg_lo, neg_hi), xmin, math.expm1(hmin), certified)


# --------------------------------------------------------------------------
# public operations


def term_moduli(f: ExponentialSum, sigma: float) -> TermModuli:
    """Moduli ``m_j = |a_j| exp(lambda_j sigma)`` of every term at ``sigma``."""
    if not math.isfinite(sigma):
        raise ValueError("sigma must be finite")
    log_m = tuple(la + lam * sigma for la, lam in zip(f.log_abs, f.exponents))
    if any(x > 709.78 for x in log_m):
        raise NumericalRangeError(f"term modulus overflows at sigma={sigma!r}")
    m = tuple(math.exp(x) for x in log_m)
    total = math.fsum(m)
    if math.isinf(total):
        raise NumericalRangeError(f"sum of moduli overflows at sigma={sigma!r}")
    return TermModuli(sigma, m, total, f.epsilon, log_m)


def _check_index(f: ExponentialSum, j: int) -> None:
    if not 0 <= j < len(f):
        raise IndexError(f"term index {j} out of range for a sum of {len(f)} terms")


def b_value(f: ExponentialSum, j: int, sigma: float) -> BValue:
    """Enclosure of ``B_j(sigma)``; a tail bound ``eps`` adds ``[0, eps / m_j]``."""
    _check_index(f, j)
    h = _b_function(f, j)
    lo = math.expm1(h(sigma))
    hi = lo
    if f.epsilon > 0:
        hi = math.expm1(_b_function(f, j, with_tail=True)(sigma))
    if math.isinf(hi) or math.isinf(lo):
        raise NumericalRangeError(f"B_{j} overflows at sigma={sigma!r}")
    return BValue(j, lo, hi)


def b_values(f: ExponentialSum, sigma: float) -> tuple[BValue, ...]:
    return tuple(b_value(f, j, sigma) for j in range(len(f)))


def b_profile(f: ExponentialSum, sigmas: Sequence[float]) -> np.ndarray:
    """Lower values of every ``B_j`` on a grid, shape ``(len(sigmas), k)``.

    Vectorized counterpart of :func:`b_values` for dense sampling; the tail
    is ignored.
    """
    sig = np.asarray(sigmas, dtype=float)
    if not np.isfinite(sig).all():
        raise ValueError("sigma values must be finite")
    k = len(f)
    log_m = np.array(f.log_abs)[None, :] + np.array(f.exponents)[None, :] * sig[:, None]
    out = np.full((len(sig), k), -1.0)
    if k < 2:
        return out
    for j in range(k):
        others = np.delete(log_m, j, axis=1) - log_m[:, j:j + 1]
        top = others.max(axis=1)
        h = top + np.log(np.exp(others - top[:, None]).sum(axis=1))
        out[:, j] = np.expm1(h)
    if np.isinf(out).any():
        raise NumericalRangeError("B_j overflows on the grid")
    return out


def b_roots(f: ExponentialSum, j: int, strip: VerticalStrip = VerticalStrip(),
            tol: Tolerances = DEFAULT_TOL, *, with_tail: bool = False) -> BRoots:
    """Isolate the (at most two) roots of ``B_j`` in the strip.

    The minimizer of the convex ``B_j`` is found by bisection on its
    increasing derivative; each monotone side then holds at most one root,
    found by bisection to ``root_tol`` and polished.  ``with_tail`` uses the
    upper enclosure (tail mass added to the other terms).
    """
    if len(f) < 2:
        raise SumValidationError("root isolation needs at least two terms")
    _check_index(f, j)
    return _isolate(_b_function(f, j, with_tail=with_tail), j, strip, tol)


def inf_modulus_bounds(f: ExponentialSum, sigma: float) -> tuple[float, float]:
    """Enclosure of ``inf_t |f(sigma + it)|`` under independent exponents.

    The closed form is ``max(0, 2 max_j m_j - S)``: the moduli can be laid out
    as a closed polygon unless one side is longer than all the others
    together.
    """
    tm = term_moduli(f, sigma)
    top = max(tm.log_m)
    rel = [math.exp(x - top) for x in tm.log_m]
    gap = math.exp(top) * (2.0 - math.fsum(rel))
    eps = f.epsilon
    return max(0.0, gap - eps), max(0.0, gap + eps)


def inf_modulus(f: ExponentialSum, sigma: float) -> float:
    """Closed-form infimum of ``|f|`` on the vertical line through ``sigma``.

    With a tail bound the enclosure is collapsed to its midpoint; use
    :func:`inf_modulus_bounds` to see whether it straddles zero.
    """
    lo, hi = inf_modulus_bounds(f, sigma)
    return 0.5 * (lo + hi)


def classify_boundary(f: ExponentialSum, sigma: float,
                      tol: Tolerances = DEFAULT_TOL) -> BoundaryClass:
    """Interior, exterior or boundary point, from the signs of every ``B_j``.

    Raises :class:`AmbiguousBoundaryError` when two equalities hold within
    ``cert_margin``.
    """
    vals = b_values(f, sigma)
    margin = tol.cert_margin
    if any(v.hi < -margin for v in vals):
        return BoundaryClass("exterior", None, vals)
    # B is a sum of k ratios, each carrying a few ulps of rounding
    slack = 8.0 * len(f) * sys.float_info.epsilon
    near = [v.j for v in vals if v.lo <= margin + slack * (1.0 + abs(v.lo))]
    if not near:
        return BoundaryClass("interior", None, vals)
    if len(near) == 1:
        return BoundaryClass("boundary", near[0], vals)
    raise AmbiguousBoundaryError(sigma, near)


# --------------------------------------------------------------------------
# set assembly


def _complement(strip: VerticalStrip, removed: Sequence[tuple[float, float, Optional[int]]]
                ) -> list[Interval]:
    """Closed pieces of the open strip left after removing open intervals.

    Two removed intervals sharing an endpoint leave that single point.
    """
    pieces: list[Interval] = []
    cur_lo, cur_kind, cur_attr = strip.alpha, EndKind.STRIP_EDGE, None
    for lo, hi, j in sorted(removed, key=lambda t: (t[0], t[1])):
        if hi <= cur_lo:
            continue
        if lo > cur_lo or (lo == cur_lo and cur_kind is EndKind.BOUNDARY):
            pieces.append(Interval(cur_lo, lo, cur_kind, EndKind.BOUNDARY, cur_attr, j))
        cur_lo, cur_kind, cur_attr = hi, EndKind.BOUNDARY, j
        if cur_lo >= strip.beta:
            return pieces
    pieces.append(Interval(cur_lo, strip.beta, cur_kind, EndKind.STRIP_EDGE, cur_attr, None))
    return pieces


def _subtract(pieces: Sequence[Interval], cut: Sequence[tuple[float, float]]) -> list[Interval]:
    out = list(pieces)
    for lo, hi in cut:
        nxt = []
        for iv in out:
            if hi <= iv.lo or lo >= iv.hi:
                nxt.append(iv)
                continue
            if iv.lo < lo:
                nxt.append(Interval(iv.lo, lo, iv.lo_kind, EndKind.BOUNDARY, iv.lo_attribution, None))
            if hi < iv.hi:
                nxt.append(Interval(hi, iv.hi, EndKind.BOUNDARY, iv.hi_kind, None, iv.hi_attribution))
        out = nxt
    return out


def _merge(regions: Sequence[tuple[float, float]]) -> list[Interval]:
    out: list[list[float]] = []
    for lo, hi in sorted(r for r in regions if r[0] < r[1]):
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return [Interval(lo, hi) for lo, hi in out]


def _difference(a: Sequence[tuple[float, float]], b: Sequence[tuple[float, float]]
                ) -> list[tuple[float, float]]:
    out = []
    for lo, hi in a:
        parts = [(lo, hi)]
        for blo, bhi in b:
            nxt = []
            for plo, phi in parts:
                if bhi <= plo or blo >= phi:
                    nxt.append((plo, phi))
                    continue
                if plo < blo:
                    nxt.append((plo, blo))
                if bhi < phi:
                    nxt.append((bhi, phi))
            parts = nxt
        out.extend(parts)
    return out


def _overlaps(negs: Sequence[tuple[float, float, int]]) -> list[tuple[int, int]]:
    bad = []
    for x in range(len(negs)):
        for y in range(x + 1, len(negs)):
            a, b = negs[x], negs[y]
            if a[0] < b[1] and b[0] < a[1]:
                bad.append((a[2], b[2]))
    return bad


def _two_term(f: ExponentialSum, strip: VerticalStrip) -> RSetResult:
    (c1, c2), (l1, l2) = f.log_abs, f.exponents
    sigma0 = (c1 - c2) / (l2 - l1) + 0.0
    if strip.contains(sigma0):
        # the lower-exponent term dominates to the left of the crossing
        iv = (Interval(sigma0, sigma0, EndKind.BOUNDARY, EndKind.BOUNDARY, 0, 1),)
        return RSetResult(iv, sigma0, sigma0, True, (), ("two terms: zeros lie on one vertical line",))
    return RSetResult((), None, None, True, (), ("two terms: crossing line outside the strip",))


def compute_rset(f: ExponentialSum, strip: VerticalStrip = VerticalStrip(),
                 tol: Tolerances = DEFAULT_TOL) -> RSetResult:
    """The closure of real parts of zeros of ``f`` inside the open strip.

    The strip minus the union over ``j`` of ``{B_j < 0}``, with each removed
    interval attributed to its ``j``.  ``certified`` requires exactly
    verified independence (for three or more terms), every sign decided
    outside ``cert_margin`` and no tail-induced ambiguity.
    """
    k = len(f)
    if k == 0:
        raise SumValidationError("empty sum")
    caveats: list[str] = []
    eps = f.epsilon
    if k == 1 and eps == 0:
        return RSetResult((), None, None, True, (), ("single term: no zeros",))
    if k == 2 and eps == 0:
        return _two_term(f, strip)

    certified = True
    status = independence_status(f)
    if k >= 3 and status != "verified":
        certified = False
        caveats.append({
            "dependent": "exponents are rationally dependent: the result is an outer bound",
            "declared": "independence declared but not verified (no exact coordinates)",
            "unknown": "independence not established: the result is an outer bound",
        }[status])

    if k >= 2:
        lower = [_isolate(_b_function(f, j), j, strip, tol) for j in range(k)]
    else:
        # a lone kept term dominates everything that was kept: B_0 = -1
        lower = [BRoots(0, (), (strip.alpha, strip.beta), math.nan, -1.0)]
    negs_lower = [(r.negative_interval[0], r.negative_interval[1], r.j)
                  for r in lower if r.negative_interval is not None]
    if eps > 0:
        upper = [_isolate(_b_function(f, j, with_tail=True), j, strip, tol) for j in range(k)]
        negs_upper = [(r.negative_interval[0], r.negative_interval[1], r.j)
                      for r in upper if r.negative_interval is not None]
    else:
        upper, negs_upper = lower, negs_lower
    if not all(r.certified for r in lower + upper):
        certified = False
        caveats.append("a sign of some B_j was decided within cert_margin")

    bad = _overlaps(negs_lower) if k >= 3 else []
    if bad:
        certified = False
        caveats.append(f"negative intervals overlap for term pairs {bad}")

    pieces = _complement(strip, negs_lower)
    uncertain: list[tuple[float, float]] = []
    if eps > 0:
        uncertain += _difference([(a, b) for a, b, _ in negs_lower], [(a, b) for a, b, _ in negs_upper])
        dom = _tail_dominance(f)
        dom_roots = _isolate(dom, -1, strip, tol)
        if dom_roots.negative_interval is not None:
            cut = [dom_roots.negative_interval]
            uncertain += [(iv.lo, iv.hi) for iv in pieces
                          if iv.hi > cut[0][0] and iv.lo < cut[0][1]]
            pieces = _subtract(pieces, cut)
        valid = f.tail.valid_on
        if strip.alpha < valid.alpha:
            uncertain.append((strip.alpha, valid.alpha))
        if valid.beta < strip.beta:
            uncertain.append((valid.beta, strip.beta))
    uncertified = _merge(uncertain)
    if uncertified:
        certified = False
        caveats.append("tail bound leaves part of the strip undecided")

    intervals = tuple(pieces)
    a_f = intervals[0].lo if intervals else None
    b_f = intervals[-1].hi if intervals else None
    return RSetResult(intervals, a_f, b_f, certified, tuple(uncertified), tuple(caveats),
                      tuple(lower))


# --------------------------------------------------------------------------
# non-emptiness checks


def _pick_witness(res: RSetResult) -> Optional[float]:
    if res.empty:
        return None
    for iv in res.intervals:
        if iv.contains(0.0):
            return 0.0
    iv = min(res.intervals, key=lambda iv: iv.distance(0.0))
    return 0.5 * (iv.lo + iv.hi)


def check_nonempty_entire(f: ExponentialSum, tol: Tolerances = DEFAULT_TOL,
                          max_doublings: int = 60) -> NonemptyCheck:
    """Non-emptiness on the whole plane, with a witness ``sigma``.

    Guaranteed when there are at least three terms with verified independent
    exponents and no tail.  The witness search grows the strip ``(-R, R)``
    by doubling ``R`` until the computed set is nonempty.
    """
    if len(f) == 0:
        raise SumValidationError("empty sum")
    guaranteed = len(f) >= 3 and f.tail is None and independence_status(f) == "verified"
    if len(f) == 1:
        return NonemptyCheck(False, None)
    radius = 1.0
    for _ in range(max_doublings):
        res = compute_rset(f, VerticalStrip(-radius, radius), tol)
        witness = _pick_witness(res)
        if witness is not None:
            return NonemptyCheck(guaranteed, witness)
        radius *= 2.0
    return NonemptyCheck(guaranteed, None)


def check_edge_conditions(f: ExponentialSum, strip: VerticalStrip,
                          tol: Tolerances = DEFAULT_TOL) -> EdgeConditions:
    """Compare ``sum_i m_i`` with ``2 sup_i m_i`` at each finite strip edge.

    A condition holds only when the sum exceeds twice the sup by more than
    ``cert_margin`` (relative); ties are not established.  Omitted tail
    terms can only raise the sum, and each is at most ``epsilon``, so the
    sup is taken as ``max(max_i m_i, epsilon)``.
    """
    results: list[Optional[bool]] = []
    sums: list[Optional[float]] = []
    sups: list[Optional[float]] = []
    for edge in (strip.alpha, strip.beta):
        tail_ok = f.tail is None or f.tail.valid_on.alpha <= edge <= f.tail.valid_on.beta
        if not math.isfinite(edge) or not tail_ok:
            results.append(None)
            sums.append(None)
            sups.append(None)
            continue
        tm = term_moduli(f, edge)
        sup = max(max(tm.m), f.epsilon)
        sums.append(tm.total)
        sups.append(sup)
        results.append(tm.total - 2.0 * sup > tol.cert_margin * tm.total)
    cond_a, cond_b = results
    return EdgeConditions(cond_a, cond_b, bool(cond_a) or bool(cond_b),
                          (sums[0], sums[1]), (sups[0], sups[1]))
