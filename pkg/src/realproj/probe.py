"""Direct evaluation, min-modulus scans and the phase-torus auxiliary function.

The auxiliary function replaces the vertical-line parameter ``t`` by free
phases over the natural basis of the exponents::

    F(sigma, x, p_1, p_2, ...) = sum_j a_j e^{lambda_j sigma} e^{i <r_j, x + 2 pi p_j>}

``sigma`` is the real part of a limit of zeros iff ``F`` vanishes for some
phase choice; :func:`torus_membership` searches for such a choice.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import least_squares, minimize_scalar

from .basis import BasisRepresentation, representation_for
from .core import ExponentialSum, Tolerances
from .rset import NumericalRangeError, inf_modulus, term_moduli

__all__ = [
    "PhaseAssignment",
    "ScanResult",
    "TorusResult",
    "eval_f",
    "eval_f_many",
    "eval_df_many",
    "min_modulus_scan",
    "eval_aux",
    "torus_membership",
    "sample_image",
]

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = Tolerances()


@dataclass(frozen=True)
class PhaseAssignment:
    """Phases ``x`` in ``[0, 2 pi)`` and integer offset vectors ``p_j``.

    ``p`` is empty when no offsets are used; otherwise it has one integer
    vector per term, each counting multiples of ``2 pi``.
    """

    x: tuple[float, ...]
    p: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        for v in self.x:
            if not (0.0 <= v < TWO_PI):
                raise ValueError(f"phase {v!r} outside [0, 2pi)")
        for row in self.p:
            if any(not isinstance(n, (int, np.integer)) for n in row):
                raise ValueError("offsets must be integers")

    @classmethod
    def wrap(cls, x: Sequence[float], p: Sequence[Sequence[int]] = ()) -> "PhaseAssignment":
        xs = []
        for v in x:
            w = math.fmod(float(v), TWO_PI)
            if w < 0:
                w += TWO_PI
            xs.append(0.0 if w >= TWO_PI else w)
        return cls(tuple(xs), tuple(tuple(int(n) for n in row) for row in p))


@dataclass(frozen=True)
class ScanResult:
    min_value: float
    argmin_t: float
    samples: int


@dataclass(frozen=True)
class TorusResult:
    """Outcome of the phase search.

    ``heuristic`` is set when the exponents are not known to be free
    (a failed search is then not a proof of non-membership).
    ``closed_form`` is the polygon infimum when it applies.
    """

    member: bool
    residual: float
    best: PhaseAssignment
    heuristic: bool
    closed_form: Optional[float] = None
    search_residual: float = math.nan


def eval_f(f: ExponentialSum, s: complex) -> complex:
    """``sum_j a_j exp(lambda_j s)`` with compensated summation in term order."""
    s = complex(s)
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise ValueError("s must be finite")
    re, im = [], []
    for t in f.terms:
        expo = t.log_scale + t.exponent * s
        if expo.real > 709.78:
            raise NumericalRangeError(f"term overflows at s={s!r}")
        v = t.coeff * cmath.exp(expo)
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im))


def _term_arrays(f: ExponentialSum) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    coeff = np.array([t.coeff for t in f.terms], dtype=complex)
    scale = np.array([t.log_scale for t in f.terms])
    lam = np.array(f.exponents)
    return coeff, scale, lam


def eval_f_many(f: ExponentialSum, s: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at an array of points (plain summation)."""
    coeff, scale, lam = _term_arrays(f)
    s = np.asarray(s, dtype=complex)
    expo = scale[None, :] + lam[None, :] * s.reshape(-1, 1)
    if expo.size and expo.real.max() > 709.78:
        raise NumericalRangeError("term overflows inside the evaluation region")
    return (coeff[None, :] * np.exp(expo)).sum(axis=1).reshape(s.shape)


def eval_df_many(f: ExponentialSum, s: np.ndarray) -> np.ndarray:
    """Derivative ``sum_j a_j lambda_j exp(lambda_j s)``."""
    coeff, scale, lam = _term_arrays(f)
    s = np.asarray(s, dtype=complex)
    expo = scale[None, :] + lam[None, :] * s.reshape(-1, 1)
    return (coeff[None, :] * lam[None, :] * np.exp(expo)).sum(axis=1).reshape(s.shape)


def min_modulus_scan(f: ExponentialSum, sigma: float, t_max: float,
                     tol: Tolerances = DEFAULT_TOL, refine: int = 32) -> ScanResult:
    """Smallest ``|f(sigma + it)|`` found for ``t`` in ``[0, t_max]``.

    A uniform grid whose step resolves the fastest relative oscillation,
    followed by bounded scalar minimization around the ``refine`` best
    grid minima.
    """
    if not t_max > 0:
        raise ValueError("t_max must be positive")
    tm = term_moduli(f, sigma)
    top = max(tm.log_m)
    coeff, _, lam = _term_arrays(f)
    phase0 = np.array([cmath.phase(t.coeff) for t in f.terms])
    w = np.exp(np.array(tm.log_m) - top) * np.exp(1j * phase0)
    span = float(lam.max() - lam.min())
    if tol.scan_step is not None:
        step = tol.scan_step
    elif span > 0:
        step = TWO_PI / (16.0 * span)
    else:
        step = t_max
    n = int(math.ceil(t_max / step)) + 1
    ts = np.linspace(0.0, t_max, n)

    def mod(t):
        return np.abs(np.exp(1j * np.outer(np.atleast_1d(t), lam)) @ w)

    vals = np.concatenate([mod(ts[i:i + 65536]) for i in range(0, n, 65536)])
    if n >= 3:
        interior = np.flatnonzero((vals[1:-1] <= vals[:-2]) & (vals[1:-1] <= vals[2:])) + 1
        cand = np.concatenate([interior, [0, n - 1]])
    else:
        cand = np.arange(n)
    cand = cand[np.argsort(vals[cand], kind="stable")][:refine]
    best_v, best_t = float(vals[cand[0]]), float(ts[cand[0]])
    h = ts[1] - ts[0] if n > 1 else t_max
    for i in cand:
        lo, hi = max(0.0, ts[i] - h), min(t_max, ts[i] + h)
        if hi <= lo:
            continue
        res = minimize_scalar(lambda t: float(mod(t)[0]), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-13})
        if res.fun < best_v or (res.fun == best_v and res.x < best_t):
            best_v, best_t = float(res.fun), float(res.x)
    return ScanResult(float(best_v) * math.exp(top), float(best_t), int(n))


def _angles(rep: BasisRepresentation, phases: PhaseAssignment) -> np.ndarray:
    R = np.array([[float(q) for q in row] for row in rep.matrix]).reshape(len(rep.matrix), -1)
    x = np.array(phases.x, dtype=float)
    ang = R @ x if R.shape[1] else np.zeros(R.shape[0])
    if phases.p:
        P = np.array(phases.p, dtype=float)
        ang = ang + TWO_PI * np.einsum("jk,jk->j", R, P)
    return ang


def eval_aux(f: ExponentialSum, sigma: float, phases: PhaseAssignment,
             rep: Optional[BasisRepresentation] = None) -> complex:
    """The auxiliary function at one phase assignment."""
    rep = representation_for(f) if rep is None else rep
    if len(rep.matrix) != len(f):
        raise ValueError("representation does not match the sum")
    if len(phases.x) != rep.dimension:
        raise ValueError(f"expected {rep.dimension} phases, got {len(phases.x)}")
    if phases.p and (len(phases.p) != len(f) or any(len(row) != rep.dimension for row in phases.p)):
        raise ValueError("offset vectors do not match the basis")
    ang = _angles(rep, phases)
    re, im = [], []
    for t, a in zip(f.terms, ang):
        expo = t.log_scale + t.exponent * sigma
        if expo > 709.78:
            raise NumericalRangeError(f"term overflows at sigma={sigma!r}")
        v = t.coeff * math.exp(expo) * cmath.exp(1j * a)
        re.append(v.real)
        im.append(v.imag)
    return complex(math.fsum(re), math.fsum(im))


# --------------------------------------------------------------------------
# torus search


def _rational_gcd(row: Sequence[Fraction]) -> Fraction:
    g = Fraction(0)
    for q in row:
        if q == 0:
            continue
        if g == 0:
            g = abs(q)
            continue
        den = g.denominator * q.denominator // math.gcd(g.denominator, q.denominator)
        g = Fraction(math.gcd(int(g * den), int(abs(q) * den)), den)
    return g


def _bezout(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd of ``values`` and integer weights reaching it."""
    g, coef = 0, [0] * len(values)
    for i, v in enumerate(values):
        if v == 0:
            continue
        if g == 0:
            g, coef[i] = abs(v), (1 if v > 0 else -1)
            continue
        # extended Euclid on (g, v)
        a, b, x0, x1, y0, y1 = g, v, 1, 0, 0, 1
        while b:
            qt = a // b
            a, b = b, a - qt * b
            x0, x1 = x1, x0 - qt * x1
            y0, y1 = y1, y0 - qt * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        coef = [c * x0 for c in coef]
        coef[i] = y0
        g = a
    return g, coef


def _offset_vector(row: Sequence[Fraction], m: int, q: int) -> tuple[int, ...]:
    """Integer ``p`` with ``<row, p> = m / q (mod 1)``."""
    if m == 0:
        return tuple(0 for _ in row)
    g = _rational_gcd(row)
    a = g.numerator  # g = a / q in lowest terms
    lcm = 1
    for x in row:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    big_g, coef = _bezout([int(x * lcm) for x in row])
    mult = (m * pow(a, -1, q)) % q
    return tuple(c * mult for c in coef)


def _search_once(w: np.ndarray, R: np.ndarray, choices: list[int], x0: np.ndarray,
                 iters: int, grid: int) -> tuple[float, np.ndarray, np.ndarray]:
    k, d = R.shape
    x = x0.copy()
    off = np.zeros(k, dtype=int)
    shift = np.zeros(k)
    solo = []
    for c in range(d):
        nz = np.flatnonzero(R[:, c])
        solo.append(int(nz[0]) if len(nz) == 1 and R[nz[0], c] == 1 else None)
    grid_pts = np.linspace(0.0, TWO_PI, grid, endpoint=False)

    def terms(xv, sh):
        return w * np.exp(1j * (R @ xv + sh))

    cur = terms(x, shift)
    val = abs(cur.sum())
    for _ in range(iters):
        before = val
        for c in range(d):
            j = solo[c]
            if j is not None:
                rest = cur.sum() - cur[j]
                if abs(rest) == 0:
                    continue
                want = cmath.phase(-rest) - cmath.phase(w[j]) - shift[j]
                x[c] = math.fmod(want, TWO_PI) % TWO_PI
            else:
                col = R[:, c]
                if not col.any():
                    continue
                base = w * np.exp(1j * (R @ x - col * x[c] + shift))
                totals = np.abs(np.exp(1j * np.outer(grid_pts, col)) @ base)
                g0 = grid_pts[int(np.argmin(totals))]
                h = TWO_PI / grid
                res = minimize_scalar(lambda v: abs((base * np.exp(1j * col * v)).sum()),
                                      bounds=(g0 - h, g0 + h), method="bounded",
                                      options={"xatol": 1e-12})
                x[c] = float(res.x) % TWO_PI
            cur = terms(x, shift)
        for j, q in enumerate(choices):
            if q <= 1:
                continue
            rest = cur.sum() - cur[j]
            opts = [abs(rest + w[j] * np.exp(1j * (R[j] @ x + TWO_PI * m / q))) for m in range(q)]
            off[j] = int(np.argmin(opts))
            shift[j] = TWO_PI * off[j] / q
            cur = terms(x, shift)
        val = abs(cur.sum())
        if before - val <= 1e-15 * max(1.0, before):
            break
    return val, x, off


def _polish(w: np.ndarray, R: np.ndarray, shift: np.ndarray, x: np.ndarray) -> tuple[float, np.ndarray]:
    if R.shape[1] == 0:
        return abs((w * np.exp(1j * shift)).sum()), x

    def resid(v):
        z = (w * np.exp(1j * (R @ v + shift))).sum()
        return [z.real, z.imag]

    def jac(v):
        dz = (1j * w * np.exp(1j * (R @ v + shift)))[:, None] * R
        s = dz.sum(axis=0)
        return np.vstack([s.real, s.imag])

    sol = least_squares(resid, x, jac=jac, method="lm" if R.shape[1] <= 2 else "trf", xtol=1e-15, ftol=1e-15, gtol=1e-15,
                        max_nfev=200)
    val = math.hypot(*resid(sol.x))
    return val, sol.x


def torus_membership(f: ExponentialSum, sigma: float, rep: Optional[BasisRepresentation] = None,
                     restarts: int = 32, iters: int = 200, tol: Tolerances = DEFAULT_TOL,
                     seed: int = 0, max_offsets: int = 64) -> TorusResult:
    """Search the phase torus for a zero of the auxiliary function.

    Multistart coordinate descent (closed form when a phase drives a single
    term, grid plus bounded refinement otherwise), finished by a
    Levenberg-Marquardt polish.  Offsets ``p_j`` are searched only for
    non-integral representations, over the finitely many residues they can
    produce.  Membership means residual <= 1e-8 times the sum of moduli.
    """
    rep = representation_for(f) if rep is None else rep
    if len(rep.matrix) != len(f):
        raise ValueError("representation does not match the sum")
    tm = term_moduli(f, sigma)
    top = max(tm.log_m)
    scale = math.exp(top)
    w = np.exp(np.array(tm.log_m) - top) * np.exp(1j * np.array([cmath.phase(t.coeff) for t in f.terms]))
    R = np.array([[float(q) for q in row] for row in rep.matrix]).reshape(len(f), rep.dimension)
    if rep.integral:
        choices = [1] * len(f)
    else:
        choices = [min(_rational_gcd(row).denominator, max_offsets) for row in rep.matrix]

    rng = np.random.default_rng(seed)
    best = (math.inf, np.zeros(rep.dimension), np.zeros(len(f), dtype=int))
    for r in range(max(1, restarts)):
        x0 = np.zeros(rep.dimension) if r == 0 else rng.uniform(0.0, TWO_PI, rep.dimension)
        val, x, off = _search_once(w, R, choices, x0, iters, tol.phase_grid)
        shift = np.array([TWO_PI * o / q for o, q in zip(off, choices)])
        pol, xp = _polish(w, R, shift, x)
        if pol < val:
            val, x = pol, xp
        if val < best[0]:
            best = (val, x, off)
        if best[0] <= 1e-15:
            break

    val, x, off = best
    if any(q > 1 for q in choices):
        p = tuple(_offset_vector(row, int(o), q) for row, o, q in zip(rep.matrix, off, choices))
    else:
        p = ()
    phases = PhaseAssignment.wrap(x, p)
    search = float(val) * scale
    threshold = 1e-8 * tm.total
    free = rep.is_free()
    if free:
        closed = inf_modulus(f, sigma)
        residual = search
        if abs(search - closed) > 1e-6 * tm.total:
            residual = closed
        return TorusResult(bool(closed <= threshold), float(residual), phases, False, closed, search)
    return TorusResult(bool(search <= threshold), search, phases, True, None, search)


def sample_image(f: ExponentialSum, sigma: float, n: int = 1024,
                 rep: Optional[BasisRepresentation] = None, seed: int = 0) -> np.ndarray:
    """Values of the auxiliary function at ``n`` random phase assignments."""
    rep = representation_for(f) if rep is None else rep
    rng = np.random.default_rng(seed)
    tm = term_moduli(f, sigma)
    w = np.array(tm.m) * np.exp(1j * np.array([cmath.phase(t.coeff) for t in f.terms]))
    R = np.array([[float(q) for q in row] for row in rep.matrix]).reshape(len(f), rep.dimension)
    X = rng.uniform(0.0, TWO_PI, (n, rep.dimension))
    return np.exp(1j * (X @ R.T)) @ w
