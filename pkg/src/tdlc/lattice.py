"""Positive rationals as prime-exponent vectors, and finitely generated subgroups of Q+.

A subgroup of Q+ generated by finitely many rationals is a lattice in the
exponent space; its canonical basis is the row Hermite normal form of the
generators' exponent vectors.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

from sympy import factorint


@total_ordering
class PositiveRational:
    """An element of the multiplicative group Q+."""

    def __init__(self, num, den=1):
        v = Fraction(num) / Fraction(den)
        if v <= 0:
            raise ValueError(f"{v} is not positive")
        self.value = v

    @classmethod
    def from_exponents(cls, exps: dict) -> "PositiveRational":
        v = Fraction(1)
        for p, e in exps.items():
            v *= Fraction(p) ** e
        return cls(v)

    @property
    def p(self) -> int:
        return self.value.numerator

    @property
    def q(self) -> int:
        return self.value.denominator

    @cached_property
    def exponents(self) -> dict[int, int]:
        e = dict(factorint(self.p))
        for prime, k in factorint(self.q).items():
            e[prime] = -k
        return e

    @property
    def cost(self) -> int:
        return self.p + self.q

    def is_one(self) -> bool:
        return self.value == 1

    def __mul__(self, other):
        return PositiveRational(self.value * _val(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return PositiveRational(self.value / _val(other))

    def __pow__(self, k: int):
        return PositiveRational(self.value ** k)

    def inverse(self) -> "PositiveRational":
        return PositiveRational(1 / self.value)

    def __eq__(self, other):
        if isinstance(other, PositiveRational):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == other
        return NotImplemented

    def __lt__(self, other):
        return self.value < _val(other)

    def __hash__(self):
        return hash(self.value)

    def __str__(self):
        return f"{self.p}/{self.q}"

    def __repr__(self):
        return f"PositiveRational({self.p}, {self.q})"


def _val(x):
    return x.value if isinstance(x, PositiveRational) else Fraction(x)


def parse_rational(text: str) -> PositiveRational:
    return PositiveRational(Fraction(text.strip()))


# -- integer row Hermite normal form ----------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row HNF: echelon rows, positive pivots, entries above a pivot in ``[0, pivot)``.

    Zero rows are dropped, so the result is a basis of the row lattice.
    """
    A = [list(r) for r in rows if any(r)]
    if not A:
        return []
    ncols = len(A[0])
    out: list[list[int]] = []
    col = 0
    while A and col < ncols:
        nz = [r for r in A if r[col] != 0]
        if not nz:
            col += 1
            continue
        # gcd-reduce the column until a single row has a non-zero entry
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            for r in nz[1:]:
                k = r[col] // piv[col]
                for j in range(col, ncols):
                    r[j] -= k * piv[j]
            nz = [r for r in nz if r[col] != 0]
        piv = nz[0]
        if piv[col] < 0:
            for j in range(ncols):
                piv[j] = -piv[j]
        A = [r for r in A if r is not piv and any(r)]
        out.append(piv)
        col += 1
    # reduce entries above pivots
    for i, r in enumerate(out):
        c = next(j for j, x in enumerate(r) if x)
        for prev in out[:i]:
            k = prev[c] // r[c]
            if k:
                for j in range(ncols):
                    prev[j] -= k * r[j]
    return out


class QPlusLattice:
    """A finitely generated subgroup of Q+ in canonical form."""

    def __init__(self, primes: Sequence[int], basis: Sequence[Sequence[int]]):
        self.primes = tuple(primes)
        self.basis = tuple(tuple(r) for r in basis)

    @classmethod
    def generated_by(cls, gens: Iterable[PositiveRational]) -> "QPlusLattice":
        gens = [g if isinstance(g, PositiveRational) else PositiveRational(g) for g in gens]
        primes = sorted({p for g in gens for p in g.exponents})
        rows = [[g.exponents.get(p, 0) for p in primes] for g in gens]
        H = hermite_normal_form(rows)
        used = [j for j in range(len(primes)) if any(r[j] for r in H)]
        return cls([primes[j] for j in used], [[r[j] for j in used] for r in H])

    @classmethod
    def trivial(cls) -> "QPlusLattice":
        return cls((), ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_trivial(self) -> bool:
        return not self.basis

    def basis_rationals(self) -> list[PositiveRational]:
        return [PositiveRational.from_exponents(dict(zip(self.primes, r))) for r in self.basis]

    def coordinates(self, x: PositiveRational) -> list[int] | None:
        """Integer coefficients of ``x`` in the canonical basis, or None if ``x`` is not in it."""
        if any(p not in self.primes for p in x.exponents):
            return None
        v = [x.exponents.get(p, 0) for p in self.primes]
        coeffs = []
        for r in self.basis:
            c = next(j for j, e in enumerate(r) if e)
            k, rem = divmod(v[c], r[c])
            if rem:
                return None
            coeffs.append(k)
            v = [a - k * b for a, b in zip(v, r)]
        return coeffs if not any(v) else None

    def __contains__(self, x) -> bool:
        if not isinstance(x, PositiveRational):
            x = PositiveRational(x)
        return self.coordinates(x) is not None

    def __eq__(self, other):
        return isinstance(other, QPlusLattice) and (self.primes, self.basis) == (other.primes, other.basis)

    def __hash__(self):
        return hash((self.primes, self.basis))

    def __str__(self):
        if self.is_trivial():
            return "trivial subgroup of Q+"
        gens = ", ".join(str(g) for g in self.basis_rationals())
        return f"<{gens}> primes={list(self.primes)} basis={[list(r) for r in self.basis]}"

    def __repr__(self):
        return f"QPlusLattice(primes={self.primes}, basis={self.basis})"

    def to_doc(self) -> dict:
        return {"primes": list(self.primes), "basis": [list(r) for r in self.basis],
                "generators": [str(g) for g in self.basis_rationals()], "rank": self.rank}
