"""Command-line interface.

Exit codes: 0 ok, 1 a checked property failed, 2 bad input, 3 result not
certified while ``--strict`` was given.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .basis import check_rational_independence, independence_status, natural_basis
from .core import EndKind, RSetResult, SumValidationError, Tolerances, format_rational
from .rset import AmbiguousBoundaryError, NumericalRangeError, b_values, classify_boundary, \
    compute_rset, inf_modulus
from .specfile import SumSpec, dumps, load_spec, number, rset_to_json
from .zerofind import ClearanceError, Rectangle, crosscheck_rset, locate_zeros, zero_free_bounds

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_UNCERTIFIED = 0, 1, 2, 3


class InputError(Exception):
    pass


def _fmt(x: float) -> str:
    """Shortest round-trip text of a float (at most 17 significant digits)."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


# --------------------------------------------------------------------------
# verify


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerifyReport:
    rset: RSetResult
    checks: list[Check] = field(default_factory=list)
    crosscheck: Optional[dict] = None

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    @property
    def message(self) -> str:
        if self.failures:
            return "failed: " + ", ".join(c.name for c in self.failures)
        if not self.rset.certified:
            return "uncertified"
        return "empty set certified" if self.rset.empty else "set certified"

    def to_json(self) -> dict:
        return {
            "status": "fail" if self.failures else "pass",
            "message": self.message,
            "rset": rset_to_json(self.rset),
            "checks": [{"property": c.name, "passed": c.passed, "detail": c.detail}
                       for c in self.checks],
            "crosscheck": self.crosscheck,
        }


def run_verify(spec: SumSpec, tol: Tolerances = Tolerances(), t_max: float = 200.0,
               grid: int = 21) -> VerifyReport:
    """Compute the set and run every structural check on it."""
    f, strip = spec.sum, spec.strip
    res = compute_rset(f, strip, tol)
    rep = VerifyReport(res)
    k = len(f)
    structured = k >= 3

    # boundary classification at every closed endpoint
    if structured:
        bad = []
        for iv in res.intervals:
            for sigma, kind, attr in ((iv.lo, iv.lo_kind, iv.lo_attribution),
                                      (iv.hi, iv.hi_kind, iv.hi_attribution)):
                if kind is not EndKind.BOUNDARY:
                    continue
                try:
                    cls = classify_boundary(f, sigma, tol)
                except AmbiguousBoundaryError as err:
                    bad.append(f"sigma={_fmt(sigma)}: equalities at terms "
                               f"{[j + 1 for j in err.indices]}")
                    continue
                if cls.kind != "boundary" or cls.equality_index != attr:
                    bad.append(f"sigma={_fmt(sigma)}: {cls.kind} "
                               f"(term {None if cls.equality_index is None else cls.equality_index + 1})")
        # a B_j whose sign was only decided inside the margin has boundary
        # points that cannot be classified at all
        undecided = [r.j + 1 for r in res.roots if not r.certified]
        if undecided:
            bad.append(f"sign of B_j within cert_margin for terms {undecided}")
        rep.checks.append(Check("boundary-classification", not bad, "; ".join(bad)))

        negs = sorted((r.negative_interval[0], r.negative_interval[1], r.j)
                      for r in res.roots if r.negative_interval is not None)
        overlaps = [(a[2] + 1, b[2] + 1) for a, b in zip(negs, negs[1:]) if b[0] < a[1]]
        unattributed = [(lo, hi) for lo, hi, j in res.gaps() if j is None]
        detail = []
        if overlaps:
            detail.append(f"overlapping negative intervals for terms {overlaps}")
        if unattributed:
            detail.append(f"gaps without a single attribution {unattributed}")
        rep.checks.append(Check("disjoint-gaps", not detail, "; ".join(detail)))

        if independence_status(f) == "verified" and f.tail is None:
            thin = [(iv.lo, iv.hi) for iv in res.intervals if iv.width <= 10 * tol.root_tol]
            rep.checks.append(Check("no-isolated-points", not thin,
                                    f"degenerate intervals {thin}" if thin else ""))

    if f.tail is None and k >= 2:
        try:
            cc = crosscheck_rset(f, strip, t_max, tol, density_points=grid, rset=res)
        except ClearanceError as err:
            rep.checks.append(Check("soundness", False, f"zero search failed: {err}"))
        else:
            rep.checks.append(Check(
                "soundness", cc.sound,
                "" if cc.sound else f"{len(cc.violations)} zeros outside the set, "
                                    f"max distance {_fmt(cc.max_violation)}"))
            rep.crosscheck = {
                "t_max": t_max,
                "zeros_found": len(cc.zeros),
                "complete": cc.complete,
                "max_violation": number(cc.max_violation),
                "violations": [{"re": z.real, "im": z.imag, "distance": number(d)}
                               for z, d in cc.violations],
                "density": [{"sigma": s, "distance": number(d)} for s, d in cc.density],
                "histogram": {"counts": list(cc.histogram[0]), "edges": list(cc.histogram[1])},
            }
    return rep


# --------------------------------------------------------------------------
# commands


def _tolerances(args) -> Tolerances:
    kw = {}
    if args.tol is not None:
        if not (math.isfinite(args.tol) and args.tol > 0):
            raise InputError("--tol must be a positive number")
        kw["root_tol"] = args.tol
    if args.cert_margin is not None:
        if not (math.isfinite(args.cert_margin) and args.cert_margin >= 0):
            raise InputError("--cert-margin must be a nonnegative number")
        kw["cert_margin"] = args.cert_margin
    return Tolerances(**kw)


def cmd_rset(args) -> tuple[int, str]:
    spec = load_spec(args.spec)
    res = compute_rset(spec.sum, spec.strip, _tolerances(args))
    code = EXIT_UNCERTIFIED if args.strict and not res.certified else EXIT_OK
    return code, dumps(rset_to_json(res))


def cmd_zeros(args) -> tuple[int, str]:
    spec = load_spec(args.spec)
    tol = _tolerances(args)
    if args.box is not None:
        s0, s1, t0, t1 = args.box
        try:
            rect = Rectangle(s0, s1, t0, t1)
        except ValueError as err:
            raise InputError(f"--box: {err}") from err
    else:
        lo, hi = zero_free_bounds(spec.sum)
        s0 = max(spec.strip.alpha, lo - 0.5)
        s1 = min(spec.strip.beta, hi + 0.5)
        if not s0 < s1:
            raise InputError("strip and zero-free bounds leave no search range; give --box")
        rect = Rectangle(s0, s1, 0.0, 100.0)
    found = locate_zeros(spec.sum, rect, tol)
    doc = {
        "rect": {"sigma_lo": found.rect.sigma_lo, "sigma_hi": found.rect.sigma_hi,
                 "t_lo": found.rect.t_lo, "t_hi": found.rect.t_hi},
        "complete": found.complete,
        "zeros": [{"re": z.location.real, "im": z.location.imag,
                   "multiplicity": z.multiplicity, "residual": z.residual}
                  for z in found.zeros],
    }
    code = EXIT_UNCERTIFIED if args.strict and not found.complete else EXIT_OK
    return code, dumps(doc)


def cmd_verify(args) -> tuple[int, str]:
    spec = load_spec(args.spec)
    if not (math.isfinite(args.tmax) and args.tmax > 0):
        raise InputError("--tmax must be positive")
    if args.grid < 1:
        raise InputError("--grid must be at least 1")
    rep = run_verify(spec, _tolerances(args), args.tmax, args.grid)
    for c in rep.failures:
        print(f"property violated: {c.name}: {c.detail}", file=sys.stderr)
    if rep.failures:
        code = EXIT_VIOLATION
    elif args.strict and not rep.rset.certified:
        code = EXIT_UNCERTIFIED
    else:
        code = EXIT_OK
    return code, dumps(rep.to_json())


def cmd_profile(args) -> tuple[int, str]:
    lo, hi, n = args.sigma_grid
    try:
        lo, hi, n_f = float(lo), float(hi), float(n)
    except ValueError as err:
        raise InputError(f"--sigma-grid: {err}") from err
    if not (math.isfinite(lo) and math.isfinite(hi)) or n_f != int(n_f) or n_f < 1 or lo > hi \
            or (n_f > 1 and lo == hi):
        raise InputError("--sigma-grid needs finite lo <= hi and a positive integer count")
    spec = load_spec(args.spec)
    f = spec.sum
    k = len(f)
    grid = np.linspace(lo, hi, int(n_f)) if n_f > 1 else np.array([lo])
    lines = [",".join(["sigma", "inf_modulus"] + [f"B_{j + 1}" for j in range(k)])]
    for s in grid:
        s = float(s)
        row = [_fmt(s), _fmt(inf_modulus(f, s))]
        if k >= 2:
            row += [_fmt(v.lo) for v in b_values(f, s)]
        else:
            row += ["-1"]
        lines.append(",".join(row))
    return EXIT_OK, "\n".join(lines) + "\n"


def cmd_basis(args) -> tuple[int, str]:
    spec = load_spec(args.spec)
    f = spec.sum
    doc: dict = {"symbols": [s.name for s in f.symbols]}
    if not f.has_coords:
        doc.update({"basis_indices": None, "matrix": None, "integral": None,
                    "independence": "declared-only" if f.independence_declared else "unknown",
                    "certificate": None})
        return EXIT_OK, dumps(doc)
    rep = natural_basis([t.coords for t in f.terms], f.exponents)
    kept = [j for j, t in enumerate(f.terms) if not (t.exponent == 0 and not any(t.coords))]
    verdict = check_rational_independence([f.terms[j].coords for j in kept])
    cert = None
    if verdict.certificate is not None:
        full = ["0"] * len(f)
        for j, q in zip(kept, verdict.certificate):
            full[j] = format_rational(q)
        cert = full
    doc.update({
        "basis_indices": [j + 1 for j in rep.basis_indices],
        "matrix": [[format_rational(q) for q in row] for row in rep.matrix],
        "integral": rep.integral,
        "independence": independence_status(f),
        "certificate": cert,
    })
    return EXIT_OK, dumps(doc)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="JSON sum specification")
    common.add_argument("--tol", type=float, default=None, help="root isolation width")
    common.add_argument("--cert-margin", type=float, default=None,
                        help="minimum margin for a certified sign")
    common.add_argument("--strict", action="store_true", help="exit 3 when not certified")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="realproj",
        description="Real projections of zeros of exponential sums.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("rset", parents=[common], help="interval set with attributions")
    p = sub.add_parser("zeros", parents=[common], help="zeros inside a rectangle")
    p.add_argument("--box", type=float, nargs=4, metavar=("S0", "S1", "T0", "T1"))
    p = sub.add_parser("verify", parents=[common], help="set plus structural checks")
    p.add_argument("--tmax", type=float, default=200.0, help="height of the zero search")
    p.add_argument("--grid", type=int, default=21, help="density probe points per interval")
    p = sub.add_parser("profile", parents=[common], help="CSV of inf|f| and B_j on a grid")
    p.add_argument("--sigma-grid", nargs=3, required=True, metavar=("LO", "HI", "N"))
    sub.add_parser("basis", parents=[common], help="natural basis and independence verdict")
    return parser


COMMANDS = {"rset": cmd_rset, "zeros": cmd_zeros, "verify": cmd_verify,
            "profile": cmd_profile, "basis": cmd_basis}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        code, text = COMMANDS[args.command](args)
    except (SumValidationError, InputError, NumericalRangeError) as err:
        print(f"realproj: error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except ClearanceError as err:
        print(f"realproj: zero search failed: {err}", file=sys.stderr)
        return EXIT_VIOLATION
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
