"""JSON spec files in, deterministic JSON/CSV out.

Term numbers in serialized output are 1-based positions in ascending
exponent order; the Python API uses 0-based indices.
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Mapping, Optional, Union

from .core import (
    EndKind,
    ExponentialSum,
    Interval,
    RSetResult,
    SumValidationError,
    VerticalStrip,
    format_rational,
    parse_extended,
    parse_rational,
    validate_sum,
)

__all__ = [
    "SumSpec",
    "load_spec",
    "parse_spec",
    "corpus_path",
    "corpus_names",
    "number",
    "dumps",
    "rset_to_json",
    "rset_from_json",
    "sum_to_json",
]


class SumSpec:
    """A validated sum together with its working strip."""

    __slots__ = ("sum", "strip")

    def __init__(self, f: ExponentialSum, strip: VerticalStrip):
        self.sum = f
        self.strip = strip

    def __iter__(self):
        return iter((self.sum, self.strip))


def _check_canonical(raw: Mapping) -> None:
    for term in raw.get("terms", ()):
        if not isinstance(term, Mapping):
            continue
        for c in term.get("coords", None) or ():
            if not isinstance(c, str):
                raise SumValidationError(f"coordinate {c!r} must be a 'p/q' string")
            if format_rational(parse_rational(c)) != c:
                raise SumValidationError(f"coordinate {c!r} is not in lowest terms")


def parse_spec(raw: Any) -> SumSpec:
    if not isinstance(raw, Mapping):
        raise SumValidationError("spec must be a JSON object")
    if "terms" not in raw or not isinstance(raw["terms"], list):
        raise SumValidationError("spec needs a 'terms' array")
    _check_canonical(raw)
    f = validate_sum(raw)
    strip_raw = raw.get("strip", {})
    if not isinstance(strip_raw, Mapping):
        raise SumValidationError("'strip' must be an object")
    strip = VerticalStrip(parse_extended(strip_raw.get("alpha", "-inf")),
                          parse_extended(strip_raw.get("beta", "inf")))
    if f.tail is not None and not strip.contains_strip(f.tail.valid_on):
        raise SumValidationError("tail validity range must lie inside the strip")
    return SumSpec(f, strip)


def load_spec(path: Union[str, Path]) -> SumSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SumValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SumValidationError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_spec(raw)


def corpus_names() -> list[str]:
    root = resources.files("realproj") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".json"))


def corpus_path(name: str) -> Path:
    """Path of a bundled example spec."""
    if not name.endswith(".json"):
        name += ".json"
    path = Path(str(resources.files("realproj") / "corpus" / name))
    if not path.exists():
        raise FileNotFoundError(name)
    return path


def number(x: Optional[float]) -> Any:
    """JSON-safe float: infinities become strings, NaN becomes null."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _term_no(j: Optional[int]) -> Optional[int]:
    return None if j is None else int(j) + 1


def rset_to_json(res: RSetResult) -> dict:
    return {
        "intervals": [
            {
                "lo": number(iv.lo),
                "hi": number(iv.hi),
                "lo_kind": iv.lo_kind.value,
                "hi_kind": iv.hi_kind.value,
                "lo_attribution": _term_no(iv.lo_attribution),
                "hi_attribution": _term_no(iv.hi_attribution),
            }
            for iv in res.intervals
        ],
        "a_f": number(res.a_f),
        "b_f": number(res.b_f),
        "certified": bool(res.certified),
        "caveats": list(res.caveats),
        "uncertified_regions": [{"lo": number(iv.lo), "hi": number(iv.hi)}
                                for iv in res.uncertified_regions],
    }


def _from_number(x: Any) -> Optional[float]:
    return None if x is None else parse_extended(x)


def rset_from_json(doc: Mapping) -> RSetResult:
    """Rebuild an :class:`RSetResult` from :func:`rset_to_json` output."""
    def back(j):
        return None if j is None else int(j) - 1

    intervals = tuple(
        Interval(parse_extended(d["lo"]), parse_extended(d["hi"]),
                 EndKind(d.get("lo_kind", "closed-boundary")),
                 EndKind(d.get("hi_kind", "closed-boundary")),
                 back(d.get("lo_attribution")), back(d.get("hi_attribution")))
        for d in doc["intervals"]
    )
    regions = tuple(
        Interval(parse_extended(d["lo"]), parse_extended(d["hi"]),
                 EndKind.BOUNDARY, EndKind.BOUNDARY, None, None)
        for d in doc.get("uncertified_regions", ())
    )
    return RSetResult(intervals, _from_number(doc["a_f"]), _from_number(doc["b_f"]),
                      bool(doc["certified"]), regions, tuple(doc.get("caveats", ())))


def sum_to_json(f: ExponentialSum, strip: Optional[VerticalStrip] = None) -> dict:
    """Spec-file form of a sum (inverse of :func:`parse_spec`)."""
    doc: dict = {}
    if f.symbols:
        doc["basis"] = [{"name": s.name, **({"value": s.value} if s.value is not None else {})}
                        for s in f.symbols]
    terms = []
    for t in f.terms:
        d: dict = {"coeff": {"re": t.coeff.real, "im": t.coeff.imag}, "exponent": t.exponent}
        if t.coords is not None:
            d["coords"] = [format_rational(q) for q in t.coords]
        if t.log_scale:
            d["log_scale"] = t.log_scale
        terms.append(d)
    doc["terms"] = terms
    if strip is not None:
        doc["strip"] = {"alpha": number(strip.alpha), "beta": number(strip.beta)}
    if f.tail is not None:
        doc["tail"] = {"epsilon": f.tail.epsilon, "alpha": number(f.tail.valid_on.alpha),
                       "beta": number(f.tail.valid_on.beta)}
    if f.independence_declared:
        doc["independent"] = True
    return doc


def dumps(doc: Any) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
