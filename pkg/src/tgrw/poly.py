"""Sparse bivariate polynomials with integer coefficients."""
from __future__ import annotations

from collections import defaultdict
from typing import Iterable, Mapping


class BivarPoly:
    """Element of Z[x, y], stored as {(i, j): coeff} with no zero coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], int] | Iterable = ()):
        acc: dict[tuple[int, int], int] = defaultdict(int)
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in term ({i}, {j})")
            acc[(int(i), int(j))] += int(c)
        self.terms = {k: c for k, c in sorted(acc.items()) if c}

    @classmethod
    def monomial(cls, i: int, j: int, coeff: int = 1) -> "BivarPoly":
        return cls({(i, j): coeff})

    @classmethod
    def constant(cls, c: int) -> "BivarPoly":
        return cls({(0, 0): c})

    def __add__(self, other: "BivarPoly") -> "BivarPoly":
        return BivarPoly(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "BivarPoly":
        return BivarPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "BivarPoly") -> "BivarPoly":
        return self + (-other)

    def __mul__(self, other: "BivarPoly") -> "BivarPoly":
        acc: dict[tuple[int, int], int] = defaultdict(int)
        for (i, j), c in self.terms.items():
            for (k, l), d in other.terms.items():
                acc[(i + k, j + l)] += c * d
        return BivarPoly(acc)

    def __pow__(self, n: int) -> "BivarPoly":
        out = BivarPoly.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, BivarPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def evaluate(self, x: int, y: int) -> int:
        return sum(c * x**i * y**j for (i, j), c in self.terms.items())

    def __repr__(self) -> str:
        return f"BivarPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in sorted(self.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][0])):
            mono = "".join(
                v if e == 1 else f"{v}^{e}" for v, e in (("x", i), ("y", j)) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_dict(self) -> dict:
        return {"terms": [{"x": i, "y": j, "coeff": c} for (i, j), c in self.terms.items()]}

    @classmethod
    def from_dict(cls, doc: dict) -> "BivarPoly":
        return cls({(t["x"], t["y"]): t["coeff"] for t in doc["terms"]})


X = BivarPoly.monomial(1, 0)
Y = BivarPoly.monomial(0, 1)
