"""Exact rational linear algebra over declared exponent coordinates.

Exponents are given as rational vectors over named symbols (for example
``-log 2 -> (-1, 0)`` over ``(log 2, log 3)``).  Everything here uses
:class:`fractions.Fraction`, so independence verdicts are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import ExponentialSum, SumValidationError, Term

__all__ = [
    "IndependenceResult",
    "BasisRepresentation",
    "check_rational_independence",
    "natural_basis",
    "is_integral",
    "effective_coords",
    "independence_status",
    "representation_for",
]

RationalVector = tuple[Fraction, ...]


@dataclass(frozen=True)
class IndependenceResult:
    independent: bool
    certificate: Optional[RationalVector] = None


@dataclass(frozen=True)
class BasisRepresentation:
    """Every exponent written over a basis chosen from the exponents themselves.

    ``matrix[j]`` holds the coordinates of term ``j`` over the terms listed in
    ``basis_indices``.  ``assumed`` marks a representation built without exact
    coordinates (independence taken on trust).
    """

    basis_indices: tuple[int, ...]
    matrix: tuple[RationalVector, ...]
    integral: bool
    assumed: bool = False

    @property
    def dimension(self) -> int:
        return len(self.basis_indices)

    def is_free(self) -> bool:
        """True when each term owns its own phase (independent exponents).

        Rows are either zero (a zero exponent) or distinct unit vectors.
        """
        seen = set()
        for row in self.matrix:
            nz = [k for k, q in enumerate(row) if q != 0]
            if not nz:
                continue
            if len(nz) != 1 or row[nz[0]] != 1 or nz[0] in seen:
                return False
            seen.add(nz[0])
        return True


class _Echelon:
    """Incremental row echelon form that remembers how rows were built.

    Each stored row is ``sum_k combo[k] * added[k]`` over the vectors
    accepted so far, so any vector reduced to zero can be expressed over
    the accepted ones exactly.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []
        self.combos: list[dict[int, Fraction]] = []
        self.count = 0

    def reduce(self, v: Sequence[Fraction]) -> tuple[list[Fraction], dict[int, Fraction]]:
        rem = list(v)
        used: dict[int, Fraction] = {}
        for row, piv, combo in zip(self.rows, self.pivots, self.combos):
            factor = rem[piv]
            if factor == 0:
                continue
            factor = factor / row[piv]
            for c in range(piv, self.dim):
                if row[c]:
                    rem[c] -= factor * row[c]
            for k, q in combo.items():
                used[k] = used.get(k, Fraction(0)) + factor * q
        return rem, {k: q for k, q in used.items() if q != 0}

    def add(self, rem: list[Fraction], used: dict[int, Fraction]) -> int:
        """Accept a vector whose remainder ``rem`` is nonzero; return its slot."""
        piv = next(c for c, q in enumerate(rem) if q != 0)  # first nonzero entry
        slot = self.count
        combo = {slot: Fraction(1)}
        for k, q in used.items():
            combo[k] = combo.get(k, Fraction(0)) - q
        self.rows.append(rem)
        self.pivots.append(piv)
        self.combos.append({k: q for k, q in combo.items() if q != 0})
        self.count += 1
        return slot


def _as_vectors(coords: Sequence[Sequence]) -> list[RationalVector]:
    vecs = [tuple(Fraction(q) for q in v) for v in coords]
    if len({len(v) for v in vecs}) > 1:
        raise SumValidationError("coordinate vectors have different dimensions")
    return vecs


def _primitive(q: Sequence[Fraction]) -> RationalVector:
    den = 1
    for x in q:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in q]
    g = 0
    for n in ints:
        g = math.gcd(g, n)
    ints = [n // g for n in ints] if g else ints
    lead = next((n for n in ints if n != 0), 1)
    if lead < 0:
        ints = [-n for n in ints]
    return tuple(Fraction(n) for n in ints)


def check_rational_independence(coords: Sequence[Sequence]) -> IndependenceResult:
    """Exact rank test; a dependence certificate ``q`` has ``sum q_j v_j = 0``.

    The certificate expresses the first vector (in input order) that lies
    in the span of its predecessors, scaled to primitive integers with a
    positive leading entry.

    >>> check_rational_independence([(1, 0), (0, 1), (1, 1)]).certificate
    (Fraction(1, 1), Fraction(1, 1), Fraction(-1, 1))
    """
    vecs = _as_vectors(coords)
    if not vecs:
        return IndependenceResult(True)
    ech = _Echelon(len(vecs[0]))
    accepted: list[int] = []
    for j, v in enumerate(vecs):
        rem, used = ech.reduce(v)
        if any(rem):
            ech.add(rem, used)
            accepted.append(j)
            continue
        q = [Fraction(0)] * len(vecs)
        q[j] = Fraction(1)
        for slot, c in used.items():
            q[accepted[slot]] -= c
        cert = _primitive(q)
        check = [sum((cj * v[c] for cj, v in zip(cert, vecs)), Fraction(0)) for c in range(len(v))]
        if any(check):
            raise AssertionError("dependence certificate failed exact verification")
        return IndependenceResult(False, cert)
    return IndependenceResult(True)


def natural_basis(coords: Sequence[Sequence], exponents: Sequence[float]) -> BasisRepresentation:
    """Greedy basis built from the exponents in order.

    Exponent ``j`` joins the basis iff it is independent of those already
    chosen; a zero exponent never joins.
    """
    vecs = _as_vectors(coords)
    if len(vecs) != len(exponents):
        raise SumValidationError("coords and exponents are not aligned")
    dim = len(vecs[0]) if vecs else 0
    ech = _Echelon(dim)
    chosen: list[int] = []
    expressed: list[dict[int, Fraction]] = []
    for j, (v, lam) in enumerate(zip(vecs, exponents)):
        if not any(v):
            if lam != 0:
                raise SumValidationError(
                    f"term {j} has zero coordinates but nonzero exponent {lam!r}")
            expressed.append({})
            continue
        rem, used = ech.reduce(v)
        if any(rem):
            slot = ech.add(rem, used)
            chosen.append(j)
            expressed.append({slot: Fraction(1)})
        else:
            expressed.append(used)
    width = len(chosen)
    matrix = tuple(
        tuple(row.get(k, Fraction(0)) for k in range(width)) for row in expressed
    )
    rep = BasisRepresentation(tuple(chosen), matrix, False)
    return BasisRepresentation(rep.basis_indices, matrix, is_integral(rep))


def is_integral(rep: BasisRepresentation) -> bool:
    return all(q.denominator == 1 for row in rep.matrix for q in row)


def effective_coords(terms: Sequence[Term]) -> list[RationalVector]:
    """Coordinates relevant to independence: a zero exponent is left out.

    Multiplying the sum by ``exp(mu s)`` for a generic ``mu`` turns
    ``{0, l2, l3, ...}`` with ``{l2, l3, ...}`` independent into an
    independent set with the same zeros, so the zero exponent does not
    count against independence.
    """
    out = []
    for t in terms:
        if t.exponent == 0 and not any(t.coords):
            continue
        out.append(t.coords)
    return out


def independence_status(f: ExponentialSum) -> str:
    """One of ``verified``, ``dependent``, ``declared`` or ``unknown``."""
    if f.has_coords:
        verdict = check_rational_independence(effective_coords(f.terms))
        return "verified" if verdict.independent else "dependent"
    return "declared" if f.independence_declared else "unknown"


def representation_for(f: ExponentialSum) -> BasisRepresentation:
    """Natural-basis representation of ``f``'s exponents.

    Without coordinates each nonzero exponent is taken as its own basis
    element and the result is marked ``assumed``.
    """
    if f.has_coords:
        return natural_basis([t.coords for t in f.terms], f.exponents)
    nonzero = [j for j, t in enumerate(f.terms) if t.exponent != 0]
    width = len(nonzero)
    slot = {j: k for k, j in enumerate(nonzero)}
    matrix = tuple(
        tuple(Fraction(1) if slot.get(j) == k else Fraction(0) for k in range(width))
        for j in range(len(f.terms))
    )
    return BasisRepresentation(tuple(nonzero), matrix, True, assumed=True)
