"""Value types shared by every other module.

An exponential sum ``f(s) = sum_j a_j exp(lambda_j s)`` is held as an
:class:`ExponentialSum`: a tuple of :class:`Term` objects sorted by
strictly increasing exponent.  All types are frozen dataclasses; build
them through :func:`validate_sum` rather than by hand.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Mapping, Optional, Sequence

__all__ = [
    "SumValidationError",
    "Symbol",
    "Term",
    "TailBound",
    "VerticalStrip",
    "ExponentialSum",
    "EndKind",
    "Interval",
    "RSetResult",
    "Tolerances",
    "validate_sum",
    "parse_rational",
    "format_rational",
    "parse_extended",
]


class SumValidationError(ValueError):
    """Raised when a sum description violates a data-model invariant."""


_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: Any) -> Fraction:
    """Parse ``"p/q"`` (or a bare integer) into a reduced :class:`Fraction`."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise SumValidationError(f"rational must be a 'p/q' string, got {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise SumValidationError(f"malformed rational {text!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise SumValidationError(f"zero denominator in {text!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(q: Fraction) -> str:
    """Canonical text form: ``"p/q"``, or ``"p"`` when the denominator is 1."""
    return str(Fraction(q))


def parse_extended(value: Any) -> float:
    """Accept a finite number or one of the strings ``"inf"``/``"-inf"``."""
    if isinstance(value, str):
        key = value.strip().lower()
        if key in ("inf", "+inf", "infinity"):
            return math.inf
        if key in ("-inf", "-infinity"):
            return -math.inf
        raise SumValidationError(f"expected a number or 'inf'/'-inf', got {value!r}")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SumValidationError(f"expected a number, got {value!r}")
    x = float(value)
    if math.isnan(x):
        raise SumValidationError("NaN is not an extended real")
    return x


@dataclass(frozen=True)
class Symbol:
    """A named basis symbol, optionally with its numeric value."""

    name: str
    value: Optional[float] = None


@dataclass(frozen=True)
class VerticalStrip:
    """The open strip ``alpha < Re s < beta``; either side may be infinite."""

    alpha: float = -math.inf
    beta: float = math.inf

    def __post_init__(self):
        if math.isnan(self.alpha) or math.isnan(self.beta):
            raise SumValidationError("strip bounds must not be NaN")
        if not self.alpha < self.beta:
            raise SumValidationError(f"strip needs alpha < beta, got ({self.alpha}, {self.beta})")
        if self.alpha == math.inf or self.beta == -math.inf:
            raise SumValidationError("strip bounds point the wrong way")

    def contains(self, sigma: float) -> bool:
        return self.alpha < sigma < self.beta

    def contains_strip(self, other: "VerticalStrip") -> bool:
        return self.alpha <= other.alpha and other.beta <= self.beta

    @property
    def finite(self) -> bool:
        return math.isfinite(self.alpha) and math.isfinite(self.beta)


@dataclass(frozen=True)
class TailBound:
    """Certified bound on the omitted moduli of a truncated series.

    ``sum_{omitted} |a_j| exp(lambda_j sigma) <= epsilon`` for every sigma in
    ``valid_on`` (closed).
    """

    epsilon: float
    valid_on: VerticalStrip

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise SumValidationError(f"tail epsilon must be finite and >= 0, got {self.epsilon}")


@dataclass(frozen=True)
class Term:
    """One summand ``coeff * exp(log_scale) * exp(exponent * s)``.

    ``log_scale`` lets a coefficient whose modulus is outside the double
    range (e.g. ``exp(-2500)``) be stored without underflow.
    """

    coeff: complex
    exponent: float
    coords: Optional[tuple[Fraction, ...]] = None
    log_scale: float = 0.0

    def __post_init__(self):
        c = complex(self.coeff)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise SumValidationError(f"coefficient must be finite, got {self.coeff!r}")
        if c == 0:
            raise SumValidationError("zero coefficient")
        if not math.isfinite(self.exponent):
            raise SumValidationError(f"exponent must be finite, got {self.exponent!r}")
        if not math.isfinite(self.log_scale):
            raise SumValidationError("log_scale must be finite")
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "exponent", float(self.exponent))
        if self.coords is not None:
            object.__setattr__(self, "coords", tuple(parse_rational(q) for q in self.coords))

    @property
    def log_abs(self) -> float:
        """``log |a_j|`` including the scale factor."""
        return math.log(abs(self.coeff)) + self.log_scale

    @property
    def log_coeff(self) -> complex:
        """A complex logarithm of ``a_j``."""
        return cmath.log(self.coeff) + self.log_scale


@dataclass(frozen=True)
class ExponentialSum:
    terms: tuple[Term, ...]
    symbols: tuple[Symbol, ...] = ()
    independence_declared: bool = False
    tail: Optional[TailBound] = None

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def exponents(self) -> tuple[float, ...]:
        return tuple(t.exponent for t in self.terms)

    @property
    def log_abs(self) -> tuple[float, ...]:
        return tuple(t.log_abs for t in self.terms)

    @property
    def has_coords(self) -> bool:
        return bool(self.terms) and self.terms[0].coords is not None

    @property
    def epsilon(self) -> float:
        return self.tail.epsilon if self.tail is not None else 0.0

    def shifted(self, mu: float) -> "ExponentialSum":
        """The sum multiplied by ``exp(mu s)``; coordinates are dropped."""
        terms = tuple(Term(t.coeff, t.exponent + mu, None, t.log_scale) for t in self.terms)
        return ExponentialSum(terms, (), self.independence_declared, None)

    def with_coefficients(self, coeffs: Sequence[complex]) -> "ExponentialSum":
        terms = tuple(
            Term(complex(c), t.exponent, t.coords, t.log_scale) for c, t in zip(coeffs, self.terms)
        )
        return ExponentialSum(terms, self.symbols, self.independence_declared, self.tail)


class EndKind(str, Enum):
    BOUNDARY = "closed-boundary"
    STRIP_EDGE = "strip-edge"


@dataclass(frozen=True)
class Interval:
    """A closed component ``[lo, hi]`` of the computed set.

    Attributions are 0-based indices into the sorted term list: the term
    whose equation ``|a_j| e^{lambda_j s} = sum of the others`` produces
    the endpoint.
    """

    lo: float
    hi: float
    lo_kind: EndKind = EndKind.BOUNDARY
    hi_kind: EndKind = EndKind.BOUNDARY
    lo_attribution: Optional[int] = None
    hi_attribution: Optional[int] = None

    def __post_init__(self):
        if self.lo > self.hi:
            raise SumValidationError(f"interval needs lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, sigma: float) -> bool:
        return self.lo <= sigma <= self.hi

    def distance(self, sigma: float) -> float:
        return max(0.0, self.lo - sigma, sigma - self.hi)


@dataclass(frozen=True)
class RSetResult:
    """The set of real projections of zeros, as a sorted list of intervals.

    ``a_f``/``b_f`` are ``None`` when the set is empty.  ``roots`` carries
    the per-term root isolation data the intervals were built from.
    """

    intervals: tuple[Interval, ...]
    a_f: Optional[float]
    b_f: Optional[float]
    certified: bool
    uncertified_regions: tuple[Interval, ...] = ()
    caveats: tuple[str, ...] = ()
    roots: tuple[Any, ...] = ()

    @property
    def empty(self) -> bool:
        return not self.intervals

    def contains(self, sigma: float) -> bool:
        return any(iv.contains(sigma) for iv in self.intervals)

    def distance(self, sigma: float) -> float:
        if not self.intervals:
            return math.inf
        return min(iv.distance(sigma) for iv in self.intervals)

    def gaps(self) -> list[tuple[float, float, Optional[int]]]:
        """Internal gaps between consecutive intervals with their attribution."""
        out = []
        for left, right in zip(self.intervals, self.intervals[1:]):
            j = left.hi_attribution if left.hi_attribution == right.lo_attribution else None
            out.append((left.hi, right.lo, j))
        return out


@dataclass(frozen=True)
class Tolerances:
    root_tol: float = 1e-9
    cert_margin: float = 1e-12
    phase_grid: int = 512
    scan_step: Optional[float] = None  # None: derived from the largest frequency
    max_iter: int = 200
    zero_residual: float = 1e-10  # relative to sum of moduli
    max_boxes: int = 200_000

    def __post_init__(self):
        if not (math.isfinite(self.root_tol) and self.root_tol > 0):
            raise SumValidationError("root_tol must be finite and > 0")
        if not (math.isfinite(self.cert_margin) and self.cert_margin >= 0):
            raise SumValidationError("cert_margin must be finite and >= 0")
        if int(self.phase_grid) != self.phase_grid or self.phase_grid < 1:
            raise SumValidationError("phase_grid must be a positive integer")
        if self.scan_step is not None and not (math.isfinite(self.scan_step) and self.scan_step > 0):
            raise SumValidationError("scan_step must be finite and > 0")
        if self.max_iter < 1 or self.max_boxes < 1:
            raise SumValidationError("iteration caps must be positive")


def _term_from_raw(raw: Any) -> Term:
    if isinstance(raw, Term):
        return raw
    if isinstance(raw, Mapping):
        if "coeff" not in raw or "exponent" not in raw:
            raise SumValidationError(f"term needs 'coeff' and 'exponent': {raw!r}")
        c = raw["coeff"]
        if isinstance(c, Mapping):
            try:
                coeff = complex(float(c["re"]), float(c.get("im", 0.0)))
            except (KeyError, TypeError, ValueError) as exc:
                raise SumValidationError(f"bad coefficient {c!r}") from exc
        elif isinstance(c, (int, float, complex)) and not isinstance(c, bool):
            coeff = complex(c)
        else:
            raise SumValidationError(f"bad coefficient {c!r}")
        exponent = raw["exponent"]
        if isinstance(exponent, bool) or not isinstance(exponent, (int, float)):
            raise SumValidationError(f"exponent must be a number, got {exponent!r}")
        coords = raw.get("coords")
        return Term(coeff, float(exponent), None if coords is None else tuple(coords),
                    float(raw.get("log_scale", 0.0)))
    if isinstance(raw, (tuple, list)) and len(raw) in (2, 3):
        coords = tuple(raw[2]) if len(raw) == 3 and raw[2] is not None else None
        return Term(complex(raw[0]), float(raw[1]), coords)
    raise SumValidationError(f"cannot interpret term {raw!r}")


def _symbols_from_raw(raw: Iterable[Any]) -> tuple[Symbol, ...]:
    out = []
    for item in raw:
        if isinstance(item, Symbol):
            out.append(item)
        elif isinstance(item, str):
            out.append(Symbol(item))
        elif isinstance(item, Mapping) and "name" in item:
            value = item.get("value")
            out.append(Symbol(str(item["name"]), None if value is None else float(value)))
        else:
            raise SumValidationError(f"bad basis symbol {item!r}")
    names = [s.name for s in out]
    if len(set(names)) != len(names):
        raise SumValidationError("duplicate basis symbol names")
    return tuple(out)


def _tail_from_raw(raw: Any) -> Optional[TailBound]:
    if raw is None or isinstance(raw, TailBound):
        return raw
    if isinstance(raw, Mapping):
        try:
            eps = float(raw["epsilon"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SumValidationError(f"bad tail {raw!r}") from exc
        strip = VerticalStrip(parse_extended(raw.get("alpha", "-inf")),
                              parse_extended(raw.get("beta", "inf")))
        return TailBound(eps, strip)
    raise SumValidationError(f"bad tail {raw!r}")


def validate_sum(raw: Any, *, independent: Optional[bool] = None) -> ExponentialSum:
    """Build a validated :class:`ExponentialSum` from a loose description.

    ``raw`` may be an existing sum (re-validated), a mapping with the keys
    of the JSON spec format (``terms``, ``basis``, ``independent``,
    ``tail``), or a plain sequence of ``(coeff, exponent[, coords])``.
    Terms come back sorted by increasing exponent.
    """
    # local import: basis depends on core
    from .basis import check_rational_independence, effective_coords

    symbols: tuple[Symbol, ...] = ()
    tail = None
    declared = False
    if isinstance(raw, ExponentialSum):
        terms_raw: Iterable[Any] = raw.terms
        symbols, tail, declared = raw.symbols, raw.tail, raw.independence_declared
    elif isinstance(raw, Mapping):
        if "terms" not in raw:
            raise SumValidationError("sum description needs 'terms'")
        terms_raw = raw["terms"]
        symbols = _symbols_from_raw(raw.get("basis") or ())
        tail = _tail_from_raw(raw.get("tail"))
        declared = bool(raw.get("independent", False))
    elif isinstance(raw, (list, tuple)):
        terms_raw = raw
    else:
        raise SumValidationError(f"cannot interpret sum description of type {type(raw).__name__}")
    if independent is not None:
        declared = bool(independent)

    terms = sorted((_term_from_raw(t) for t in terms_raw), key=lambda t: t.exponent)
    for a, b in zip(terms, terms[1:]):
        if a.exponent == b.exponent:
            raise SumValidationError(f"duplicate exponent {a.exponent!r}")

    with_coords = [t.coords is not None for t in terms]
    if any(with_coords) and not all(with_coords):
        raise SumValidationError("coords must be given on every term or on none")
    if terms and all(with_coords):
        dims = {len(t.coords) for t in terms}
        if len(dims) != 1:
            raise SumValidationError("coords dimension mismatch between terms")
        dim = dims.pop()
        if symbols and dim != len(symbols):
            raise SumValidationError(
                f"coords have dimension {dim} but {len(symbols)} basis symbols are declared")
        if not symbols:
            symbols = tuple(Symbol(f"g{k + 1}") for k in range(dim))
        _check_coords_match_values(terms, symbols)
        if declared:
            verdict = check_rational_independence(effective_coords(terms))
            if not verdict.independent:
                raise SumValidationError(
                    "declared independence contradicted by exact rank check "
                    f"(relation {[format_rational(q) for q in verdict.certificate]})")

    return ExponentialSum(tuple(terms), symbols, declared, tail)


def _check_coords_match_values(terms: Sequence[Term], symbols: Sequence[Symbol]) -> None:
    if any(s.value is None for s in symbols):
        return
    values = [s.value for s in symbols]
    for s in symbols:
        # zero is rationally dependent on anything, so it cannot be a basis element
        if s.value == 0.0 or not math.isfinite(s.value):
            raise SumValidationError(f"basis symbol {s.name!r} must have a finite nonzero value")
    for t in terms:
        recon = math.fsum(float(q) * v for q, v in zip(t.coords, values))
        scale = max(1.0, abs(t.exponent), math.fsum(abs(float(q) * v) for q, v in zip(t.coords, values)))
        if abs(recon - t.exponent) > 1e-9 * scale:
            raise SumValidationError(
                f"exponent {t.exponent!r} does not match its coordinates (value {recon!r})")
