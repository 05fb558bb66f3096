"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

Monomial = Tuple[int, ...]


class Poly:
    """A polynomial in a fixed number of variables, as ``{exponents: coefficient}``.

    Instances are treated as immutable values.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, object] | None = None):
        self.nvars = nvars
        clean: Dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            if len(m) != nvars:
                raise ValueError(f"monomial {m} does not have {nvars} exponents")
            c = c if isinstance(c, Fraction) else Fraction(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "Poly":
        return cls(len(exps), {tuple(exps): c})

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return Poly.constant(self.nvars, other)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.nvars, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def derivative(self, i: int) -> "Poly":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Poly(self.nvars, out)

    def weights_present(self, weights: Sequence[int]) -> set:
        return {monomial_weight(m, weights) for m in self.terms}

    def homogeneous_parts(self, weights: Sequence[int]) -> Dict[int, "Poly"]:
        parts: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(monomial_weight(m, weights), {})[m] = c
        return {w: Poly(self.nvars, t) for w, t in parts.items()}

    def substitute(self, images: Sequence["Poly"]) -> "Poly":
        """Replace variable i by ``images[i]`` (all in one common ring)."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        if not images:
            return Poly(0, dict(self.terms))
        nv = images[0].nvars
        out = Poly(nv)
        powers: Dict[Tuple[int, int], Poly] = {}
        for m, c in self.terms.items():
            term = Poly.constant(nv, c)
            for i, e in enumerate(m):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = images[i] ** e
                    term = term * powers[(i, e)]
            out = out + term
        return out

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m in sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m))):
            c = self.terms[m]
            factors = []
            for name, e in zip(names, m):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if a.denominator != 1:
                coef = f"{a.numerator}/{a.denominator}"
            else:
                coef = str(a.numerator)
            if mono and a == 1:
                body = mono
            elif mono:
                body = f"{coef}*{mono}"
            else:
                body = coef
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            s += f" {sign} {body}"
        return s

    def __repr__(self) -> str:
        return f"Poly({self.nvars}, {self.terms!r})"


def monomial_weight(m: Iterable[int], weights: Sequence[int]) -> int:
    return sum(e * w for e, w in zip(m, weights))


def monomials_of_weight(weights: Sequence[int], w: int) -> list:
    """All exponent vectors of total weight ``w``, in descending graded-lex order.

    The order compares total degree first, then exponent vectors
    lexicographically with the first variable largest.
    """
    out = []
    g = len(weights)

    def rec(i, remaining, prefix):
        if i == g:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        wi = weights[i]
        for e in range(remaining // wi, -1, -1):
            prefix.append(e)
            rec(i + 1, remaining - e * wi, prefix)
            prefix.pop()

    if w >= 0:
        rec(0, w, [])
    out.sort(key=lambda m: (sum(m), m), reverse=True)
    return out
