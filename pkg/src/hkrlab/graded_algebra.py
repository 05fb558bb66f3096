"""Connected weight-graded commutative Q-algebras given by generators and relations.

``A = Q[x_1..x_g] / (f_1..f_r)`` with every generator of positive weight and
every relation weight-homogeneous. Each weight piece ``A_w`` is handled
separately: the ideal slice ``I_w`` is spanned by ``m * f_j`` for monomials
``m`` of complementary weight, and ``A_w`` gets the basis of monomials left
over after row reduction. Elimination runs from the smallest monomial in
graded-lex order upward, so the surviving basis monomials are the largest
ones (in ``Q[x,y]/(y^2 - x^3)`` with weights (2, 3) the weight-6 basis is
``x^3``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_linear import QuotientSpace, Vec, vec_iadd
from .poly import Monomial, Poly, monomial_weight, monomials_of_weight


class AlgebraError(ValueError):
    pass


class NotHomogeneous(AlgebraError):
    pass


class InvalidPresentation(AlgebraError):
    pass


@dataclass(frozen=True)
class Presentation:
    generators: Tuple[Tuple[str, int], ...]
    relations: Tuple[Poly, ...] = ()

    def __post_init__(self):
        names = [n for n, _ in self.generators]
        if len(set(names)) != len(names):
            raise InvalidPresentation(f"duplicate generator names in {names}")
        for name, w in self.generators:
            if not isinstance(w, int) or w < 1:
                raise InvalidPresentation(f"generator {name!r} needs a positive integer weight, got {w!r}")
        g = len(names)
        for f in self.relations:
            if f.nvars != g:
                raise InvalidPresentation("relation lives in the wrong polynomial ring")
            ws = f.weights_present(self.weights)
            if len(ws) > 1:
                raise NotHomogeneous(f"relation {f.format(names)} mixes weights {sorted(ws)}")
            if ws == {0}:
                raise InvalidPresentation(f"relation {f.format(names)} is a nonzero constant")

    @property
    def names(self) -> List[str]:
        return [n for n, _ in self.generators]

    @property
    def weights(self) -> List[int]:
        return [w for _, w in self.generators]

    @property
    def nvars(self) -> int:
        return len(self.generators)

    def relation_weight(self, j: int) -> int:
        f = self.relations[j]
        if not f:
            return 0
        return monomial_weight(next(iter(f.terms)), self.weights)

    def variable(self, name_or_index) -> Poly:
        i = name_or_index if isinstance(name_or_index, int) else self.names.index(name_or_index)
        return Poly.variable(self.nvars, i)

    def describe(self) -> str:
        gens = ", ".join(self.names)
        if not self.relations:
            return f"Q[{gens}]"
        rels = ", ".join(f.format(self.names) for f in self.relations)
        return f"Q[{gens}]/({rels})"


@dataclass
class _Slice:
    monomials: List[Monomial]
    index: Dict[Monomial, int]
    quotient: QuotientSpace
    basis: List[Monomial] = field(default_factory=list)


class GradedAlgebra:
    """Per-weight linear model of a presented connected graded algebra.

    Elements of ``A_w`` are sparse coordinate vectors over :meth:`weight_basis`.
    Weight caches fill on demand.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.weights = presentation.weights
        self.nvars = presentation.nvars
        self._slices: Dict[int, _Slice] = {}
        self._products: Dict[Tuple[int, int, int, int], Vec] = {}
        self._rel_weights = [presentation.relation_weight(j) for j in range(len(presentation.relations))]
        self.min_weight = min(self.weights) if self.weights else None

    @classmethod
    def polynomial(cls, names: Sequence[str], weights: Optional[Sequence[int]] = None) -> "GradedAlgebra":
        weights = weights or [1] * len(names)
        return cls(Presentation(tuple(zip(names, weights))))

    @classmethod
    def from_strings(cls, generators: Sequence[Tuple[str, int]], relations: Sequence[str] = ()) -> "GradedAlgebra":
        from .parsing import parse_poly, to_poly
        names = [n for n, _ in generators]
        rels = tuple(to_poly(parse_poly(r, names), names) for r in relations)
        return cls(Presentation(tuple(generators), rels))

    # --- weight slices ---------------------------------------------------------

    def _slice(self, w: int) -> _Slice:
        s = self._slices.get(w)
        if s is None:
            s = self._build_slice(w)
            self._slices[w] = s
        return s

    def _build_slice(self, w: int) -> _Slice:
        monos = monomials_of_weight(self.weights, w) if w >= 0 else []
        index = {m: k for k, m in enumerate(monos)}
        rels: List[Vec] = []
        for f, d in zip(self.presentation.relations, self._rel_weights):
            if d > w:
                continue
            for m in monomials_of_weight(self.weights, w - d):
                v: Vec = {}
                for e, c in f.terms.items():
                    key = index[tuple(a + b for a, b in zip(m, e))]
                    v[key] = v.get(key, 0) + c
                rels.append({k: c for k, c in v.items() if c})
        # smallest monomials are eliminated first
        priority = list(range(len(monos) - 1, -1, -1))
        q = QuotientSpace(len(monos), rels, priority)
        return _Slice(monos, index, q, [monos[j] for j in q.basis])

    def weight_basis(self, w: int) -> List[Monomial]:
        return list(self._slice(w).basis)

    def dim(self, w: int) -> int:
        if w < 0:
            return 0
        return self._slice(w).quotient.dim

    def ideal_rank(self, w: int) -> int:
        return self._slice(w).quotient.relation_rank

    def hilbert_series(self, W: int) -> List[int]:
        return [self.dim(w) for w in range(W + 1)]

    # --- normal forms ----------------------------------------------------------

    def reduce_monomial(self, m: Monomial) -> Tuple[int, Vec]:
        w = monomial_weight(m, self.weights)
        s = self._slice(w)
        return w, s.quotient.reduce({s.index[tuple(m)]: Fraction(1)})

    def normal_form(self, p: Poly, weight: Optional[int] = None) -> Tuple[int, Vec]:
        """Weight and coordinates of a homogeneous polynomial modulo the ideal.

        ``weight`` is required for the zero polynomial and checked otherwise.
        """
        if p.nvars != self.nvars:
            raise AlgebraError("polynomial lives in a different ring")
        ws = p.weights_present(self.weights)
        if len(ws) > 1:
            raise NotHomogeneous(f"{p.format(self.presentation.names)} mixes weights {sorted(ws)}")
        if ws:
            w = ws.pop()
            if weight is not None and weight != w:
                raise NotHomogeneous(f"expected weight {weight}, got {w}")
        elif weight is None:
            raise NotHomogeneous("the zero polynomial needs an explicit weight")
        else:
            w = weight
        s = self._slice(w)
        amb: Vec = {}
        for m, c in p.terms.items():
            amb[s.index[m]] = c
        return w, s.quotient.reduce(amb)

    def graded_normal_form(self, p: Poly) -> Dict[int, Vec]:
        """Normal forms of every homogeneous component of a (possibly mixed) polynomial."""
        out = {}
        for w, part in p.homogeneous_parts(self.weights).items():
            v = self.normal_form(part)[1]
            if v:
                out[w] = v
        return out

    def lift(self, w: int, coords: Vec) -> Poly:
        basis = self._slice(w).basis
        return Poly(self.nvars, {basis[k]: c for k, c in coords.items()})

    def one(self) -> Vec:
        return {0: Fraction(1)}

    def generator(self, i: int) -> Tuple[int, Vec]:
        return self.normal_form(Poly.variable(self.nvars, i))

    # --- multiplication ----------------------------------------------------------

    def basis_product(self, v: int, i: int, w: int, j: int) -> Vec:
        """Product of basis element i of A_v with basis element j of A_w, in A_{v+w}."""
        if v > w or (v == w and i > j):
            v, i, w, j = w, j, v, i
        key = (v, i, w, j)
        out = self._products.get(key)
        if out is None:
            a = self._slice(v).basis[i]
            b = self._slice(w).basis[j]
            out = self.reduce_monomial(tuple(x + y for x, y in zip(a, b)))[1]
            self._products[key] = out
        return out

    def multiply(self, v: int, x: Vec, w: int, y: Vec) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                vec_iadd(out, self.basis_product(v, i, w, j), a * b)
        return out

    def __repr__(self) -> str:
        return f"GradedAlgebra({self.presentation.describe()})"


def weight_basis(A: GradedAlgebra, w: int) -> List[Monomial]:
    return A.weight_basis(w)


def normal_form(A: GradedAlgebra, p: Poly) -> Vec:
    return A.normal_form(p)[1]


def multiply(A: GradedAlgebra, v: int, x: Vec, w: int, y: Vec) -> Vec:
    return A.multiply(v, x, w, y)


def hilbert_series(A: GradedAlgebra, W: int) -> List[int]:
    return A.hilbert_series(W)


def series_coefficients(numerator_degrees: Sequence[int], denominator_degrees: Sequence[int], W: int) -> List[int]:
    """Coefficients through t^W of prod(1 - t^d for d in num) / prod(1 - t^w for w in den)."""
    coeffs = [0] * (W + 1)
    coeffs[0] = 1
    for d in numerator_degrees:
        new = list(coeffs)
        for k in range(d, W + 1):
            new[k] -= coeffs[k - d]
        coeffs = new
    for w in denominator_degrees:
        for k in range(w, W + 1):
            coeffs[k] += coeffs[k - w]
    return coeffs
