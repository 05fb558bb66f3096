"""Kähler differentials, the de Rham algebra DR(A) and its epsilon-structure.

``Omega^p_w`` is the weight-``w`` part of the p-th exterior power of the
Kähler module. It is modelled as the quotient of the free module
``sum_I A_{w - wt(I)} dx_I`` (``I`` strictly increasing, ``|I| = p``) by the
span of ``m * df_j ^ dx_J``. Basis vectors of ``Omega^p_w`` are a subset of
those ambient coordinates ``(I, k)`` meaning ``a_k dx_I`` with ``a_k`` the
k-th basis monomial of ``A_{w - wt(I)}``.

The form degree ``p`` is stored as a non-negative index and epsilon (the de
Rham differential) raises it by one. In homological language the p-forms sit
in degree ``-p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .exact_linear import (QuotientSpace, RatMatrix, Vec, homology_dim, solve, vec_iadd)
from .graded_algebra import AlgebraError, GradedAlgebra
from .poly import Poly, monomial_weight

# A form spread over several weights: {weight: coordinates}.
GradedVec = Dict[int, Vec]


def sort_with_sign(indices: Sequence[int]) -> Tuple[int, Optional[Tuple[int, ...]]]:
    """Sign of the permutation sorting ``indices`` and the sorted tuple.

    Returns ``(0, None)`` when an index repeats. Every sign arising from
    reordering anticommuting symbols (dx's, tensor slots of odd degree)
    goes through here.
    """
    seq = list(indices)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    # insertion sort, counting transpositions
    for i in range(1, len(seq)):
        j = i
        while j > 0 and seq[j - 1] > seq[j]:
            seq[j - 1], seq[j] = seq[j], seq[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(seq)


def permutation_sign(perm: Sequence[int]) -> int:
    return sort_with_sign(perm)[0]


class RelationNotRespected(AlgebraError):
    pass


@dataclass
class _Component:
    ambient: List[Tuple[Tuple[int, ...], int]]
    index: Dict[Tuple[Tuple[int, ...], int], int]
    quotient: QuotientSpace
    basis: List[Tuple[Tuple[int, ...], int]]


class DeRhamAlgebra:
    """DR(A) with wedge product and epsilon = de Rham differential.

    Components ``(p, w)`` are built lazily. ``p_max`` and ``W`` given at
    construction are precomputed eagerly but are not hard limits.
    """

    def __init__(self, A: GradedAlgebra, p_max: Optional[int] = None, W: Optional[int] = None):
        self.A = A
        self.g = A.nvars
        self.weights = A.weights
        self._components: Dict[Tuple[int, int], _Component] = {}
        self._eps: Dict[Tuple[int, int], RatMatrix] = {}
        pres = A.presentation
        # jacobian[j][i] = normal form of d f_j / d x_i, as (weight, coordinates)
        self._jacobian = []
        for j, f in enumerate(pres.relations):
            d = pres.relation_weight(j)
            row = []
            for i in range(self.g):
                row.append(A.normal_form(f.derivative(i), weight=d - self.weights[i]))
            self._jacobian.append(row)
        if p_max is not None and W is not None:
            for p in range(p_max + 2):
                for w in range(W + 1):
                    self.epsilon_matrix(p, w)

    # --- components --------------------------------------------------------------

    def _wt(self, I: Sequence[int]) -> int:
        return sum(self.weights[i] for i in I)

    def component(self, p: int, w: int) -> _Component:
        c = self._components.get((p, w))
        if c is None:
            c = self._build(p, w)
            self._components[(p, w)] = c
        return c

    def _build(self, p: int, w: int) -> _Component:
        A = self.A
        ambient = []
        if 0 <= p <= self.g:
            for I in combinations(range(self.g), p):
                for k in range(A.dim(w - self._wt(I))):
                    ambient.append((I, k))
        index = {key: n for n, key in enumerate(ambient)}
        relations: List[Vec] = []
        if p >= 1:
            for j, row in enumerate(self._jacobian):
                d = A.presentation.relation_weight(j)
                for J in combinations(range(self.g), p - 1):
                    v = w - d - self._wt(J)
                    for m in range(A.dim(v)):
                        rel: Vec = {}
                        for i, (ji, jac) in enumerate(row):
                            if not jac:
                                continue
                            coeff = A.multiply(v, {m: Fraction(1)}, ji, jac)
                            sign, I = sort_with_sign((i,) + J)
                            if sign:
                                for k, c in coeff.items():
                                    vec_iadd(rel, {index[(I, k)]: c}, sign)
                        if rel:
                            relations.append(rel)
        q = QuotientSpace(len(ambient), relations)
        return _Component(ambient, index, q, [ambient[j] for j in q.basis])

    def dim(self, p: int, w: int) -> int:
        if p < 0 or w < 0:
            return 0
        return self.component(p, w).quotient.dim

    def basis(self, p: int, w: int) -> List[Tuple[Tuple[int, ...], int]]:
        return list(self.component(p, w).basis)

    def from_ambient(self, p: int, w: int, amb: Dict[Tuple[Tuple[int, ...], int], Fraction]) -> Vec:
        c = self.component(p, w)
        return c.quotient.reduce({c.index[key]: x for key, x in amb.items() if x})

    def bound(self, w: int) -> int:
        """Largest p with a possibly nonzero Omega^p_w."""
        if not self.g or w <= 0:
            return 0
        return min(self.g, w // min(self.weights))

    # --- building forms ------------------------------------------------------------

    def form(self, p: int, coefficients: Dict[Tuple[int, ...], Poly]) -> GradedVec:
        """The form ``sum_I coefficients[I] dx_I`` (any order of I, any weights)."""
        out: GradedVec = {}
        for I, poly in coefficients.items():
            if len(I) != p:
                raise ValueError(f"index {I} does not have length {p}")
            sign, J = sort_with_sign(I)
            if not sign:
                continue
            for v, coords in self.A.graded_normal_form(poly).items():
                w = v + self._wt(J)
                piece = self.from_ambient(p, w, {(J, k): sign * x for k, x in coords.items()})
                if piece:
                    vec_iadd(out.setdefault(w, {}), piece)
        return {w: x for w, x in out.items() if x}

    def function(self, poly: Poly) -> GradedVec:
        return self.form(0, {(): poly})

    # --- epsilon -------------------------------------------------------------------

    def _epsilon_basis(self, p: int, w: int, j: int) -> Vec:
        I, k = self.component(p, w).basis[j]
        A = self.A
        v = w - self._wt(I)
        mono = A.weight_basis(v)[k]
        amb: Dict[Tuple[Tuple[int, ...], int], Fraction] = {}
        for i, e in enumerate(mono):
            if not e:
                continue
            sign, J = sort_with_sign((i,) + I)
            if not sign:
                continue
            lowered = list(mono)
            lowered[i] -= 1
            _, coords = A.reduce_monomial(tuple(lowered))
            for kk, c in coords.items():
                key = (J, kk)
                amb[key] = amb.get(key, 0) + sign * e * c
        return self.from_ambient(p + 1, w, amb)

    def epsilon_matrix(self, p: int, w: int) -> RatMatrix:
        """Matrix of epsilon: Omega^p_w -> Omega^{p+1}_w."""
        m = self._eps.get((p, w))
        if m is None:
            n = self.dim(p, w)
            m = RatMatrix.from_columns(self.dim(p + 1, w), [self._epsilon_basis(p, w, j) for j in range(n)])
            self._eps[(p, w)] = m
        return m

    def epsilon(self, p: int, w: int, x: Vec) -> Vec:
        return self.epsilon_matrix(p, w).apply(x)

    def gepsilon(self, p: int, x: GradedVec) -> GradedVec:
        out = {}
        for w, v in x.items():
            y = self.epsilon(p, w, v)
            if y:
                out[w] = y
        return out

    # --- wedge ---------------------------------------------------------------------

    def wedge_basis(self, p: int, v: int, i: int, q: int, u: int, j: int) -> Vec:
        I, a = self.component(p, v).basis[i]
        J, c = self.component(q, u).basis[j]
        sign, K = sort_with_sign(I + J)
        if not sign:
            return {}
        A = self.A
        prod = A.basis_product(v - self._wt(I), a, u - self._wt(J), c)
        return self.from_ambient(p + q, v + u, {(K, k): sign * x for k, x in prod.items()})

    def wedge(self, p: int, v: int, x: Vec, q: int, u: int, y: Vec) -> Vec:
        out: Vec = {}
        for i, a in x.items():
            for j, b in y.items():
                vec_iadd(out, self.wedge_basis(p, v, i, q, u, j), a * b)
        return out

    def gwedge(self, p: int, x: GradedVec, q: int, y: GradedVec) -> GradedVec:
        out: GradedVec = {}
        for v, xv in x.items():
            for u, yu in y.items():
                z = self.wedge(p, v, xv, q, u, yu)
                if z:
                    vec_iadd(out.setdefault(v + u, {}), z)
        return {w: z for w, z in out.items() if z}

    def __repr__(self) -> str:
        return f"DeRhamAlgebra({self.A.presentation.describe()})"


class KaehlerModule:
    """Omega^1_{A/Q} with its universal derivation."""

    def __init__(self, dr: DeRhamAlgebra):
        self.dr = dr
        self.A = dr.A

    def dim(self, w: int) -> int:
        return self.dr.dim(1, w)

    def basis(self, w: int):
        return self.dr.basis(1, w)

    def jacobian_rank(self, w: int) -> int:
        return self.dr.component(1, w).quotient.relation_rank

    def free_rank(self, w: int) -> int:
        return sum(self.A.dim(w - wi) for wi in self.A.weights)

    def derivation(self, w: int, a: Vec) -> Vec:
        return self.dr.epsilon(0, w, a)


def kaehler(A: GradedAlgebra) -> KaehlerModule:
    return KaehlerModule(DeRhamAlgebra(A))


def derham_algebra(A: GradedAlgebra, p_max: Optional[int] = None, W: Optional[int] = None) -> DeRhamAlgebra:
    return DeRhamAlgebra(A, p_max, W)


def derham_cohomology_dim(D: DeRhamAlgebra, p: int, w: int) -> int:
    """dim H^p of ``Omega^{p-1}_w -> Omega^p_w -> Omega^{p+1}_w``."""
    d_out = D.epsilon_matrix(p, w)
    if p == 0:
        d_in = RatMatrix.zeros(D.dim(0, w), 0)
    else:
        d_in = D.epsilon_matrix(p - 1, w)
    return homology_dim(d_out, d_in)


# --- the universal property --------------------------------------------------------

class EpsilonMap:
    """The epsilon-cdga map DR(source.A) -> target extending an algebra map.

    ``images[i]`` is the image of the i-th generator, a polynomial in the
    target algebra's generators; it need not be homogeneous.
    """

    def __init__(self, source: DeRhamAlgebra, target: DeRhamAlgebra, images: Sequence[Poly]):
        if len(images) != source.g:
            raise ValueError("need one image per source generator")
        self.source = source
        self.target = target
        self.images = list(images)
        self._gen_images = [target.function(f) for f in self.images]
        self._gen_diffs = [target.gepsilon(0, x) for x in self._gen_images]
        self._cache: Dict[Tuple[int, int], List[GradedVec]] = {}

    def image_of_polynomial(self, poly: Poly) -> GradedVec:
        return self.target.function(poly.substitute(self.images))

    def _image_basis(self, p: int, w: int, j: int) -> GradedVec:
        src = self.source
        I, k = src.component(p, w).basis[j]
        mono = src.A.weight_basis(w - src._wt(I))[k]
        result = self.image_of_polynomial(Poly.monomial(mono))
        deg = 0
        for i in I:
            result = self.target.gwedge(deg, result, 1, self._gen_diffs[i])
            deg += 1
        return result

    def images_of_basis(self, p: int, w: int) -> List[GradedVec]:
        key = (p, w)
        if key not in self._cache:
            self._cache[key] = [self._image_basis(p, w, j) for j in range(self.source.dim(p, w))]
        return self._cache[key]

    def apply(self, p: int, w: int, x: Vec) -> GradedVec:
        out: GradedVec = {}
        imgs = self.images_of_basis(p, w)
        for j, c in x.items():
            for u, y in imgs[j].items():
                vec_iadd(out.setdefault(u, {}), y, c)
        return {u: y for u, y in out.items() if y}

    def gapply(self, p: int, x: GradedVec) -> GradedVec:
        out: GradedVec = {}
        for w, v in x.items():
            for u, y in self.apply(p, w, v).items():
                vec_iadd(out.setdefault(u, {}), y)
        return {u: y for u, y in out.items() if y}

    def matrix(self, p: int, w: int) -> Dict[int, RatMatrix]:
        """Blocks ``{target weight: matrix Omega^p_w -> target Omega^p_u}``."""
        imgs = self.images_of_basis(p, w)
        weights = sorted({u for img in imgs for u in img})
        return {u: RatMatrix.from_columns(self.target.dim(p, u), [img.get(u, {}) for img in imgs])
                for u in weights}


def epsilon_extend(A: GradedAlgebra, target: DeRhamAlgebra, images: Sequence[Poly],
                   source: Optional[DeRhamAlgebra] = None) -> EpsilonMap:
    """Extend an algebra map A -> target (degree 0) to DR(A) -> target.

    Raises :class:`RelationNotRespected` if some defining relation of A does
    not map to zero.
    """
    if source is None:
        source = DeRhamAlgebra(A)
    elif source.A is not A:
        raise ValueError("source de Rham algebra is built on a different algebra")
    names = A.presentation.names
    for f in A.presentation.relations:
        img = target.A.graded_normal_form(f.substitute(list(images)))
        if img:
            raise RelationNotRespected(f"relation {f.format(names)} is not sent to zero")
    return EpsilonMap(source, target, images)


def _combine(coeffs: Vec, values: Sequence[GradedVec]) -> GradedVec:
    out: GradedVec = {}
    for k, c in coeffs.items():
        for u, y in values[k].items():
            vec_iadd(out.setdefault(u, {}), y, c)
    return {u: y for u, y in out.items() if y}


def constrained_extension(source: DeRhamAlgebra, target: DeRhamAlgebra, images: Sequence[Poly],
                          p_max: int, W: int) -> Dict[Tuple[int, int], List[GradedVec]]:
    """Solve for the extension from its defining constraints alone.

    Block by block (increasing p, then w) the unknown map on ``Omega^p_w`` is
    pinned down by linear constraints: commuting with epsilon on functions,
    A-linearity over the given map, and multiplicativity ``psi(a ^ b) =
    psi(a) ^ psi(b)`` against already-solved blocks. Raises ``ValueError`` if
    the constraints fail to span a block (non-uniqueness) or are inconsistent
    (non-existence). Returns the images of basis vectors.
    """
    psi: Dict[Tuple[int, int], List[GradedVec]] = {}
    psi0 = {}
    for w in range(W + 1):
        psi0[w] = [target.function(Poly.monomial(m).substitute(list(images)))
                   for m in source.A.weight_basis(w)]
        psi[(0, w)] = psi0[w]

    def image(p, w, x: Vec) -> GradedVec:
        return _combine(x, psi[(p, w)])

    for p in range(1, p_max + 1):
        for w in range(W + 1):
            n = source.dim(p, w)
            cons: List[Tuple[Vec, GradedVec]] = []
            if p == 1:
                for k in range(source.A.dim(w)):
                    cons.append((source.epsilon(0, w, {k: Fraction(1)}), target.gepsilon(0, psi0[w][k])))
                for v in range(1, w):
                    for k in range(source.A.dim(v)):
                        for j in range(source.dim(1, w - v)):
                            s = source.wedge(0, v, {k: Fraction(1)}, 1, w - v, {j: Fraction(1)})
                            r = target.gwedge(0, psi0[v][k], 1, psi[(1, w - v)][j])
                            cons.append((s, r))
            else:
                for v in range(1, w):
                    for i in range(source.dim(1, v)):
                        for j in range(source.dim(p - 1, w - v)):
                            s = source.wedge(1, v, {i: Fraction(1)}, p - 1, w - v, {j: Fraction(1)})
                            r = target.gwedge(1, psi[(1, v)][i], p - 1, psi[(p - 1, w - v)][j])
                            cons.append((s, r))
                for j in range(source.dim(p - 1, w)):
                    s = source.epsilon(p - 1, w, {j: Fraction(1)})
                    r = target.gepsilon(p - 1, psi[(p - 1, w)][j])
                    cons.append((s, r))
            if n == 0:
                psi[(p, w)] = []
                continue
            S = RatMatrix.from_columns(n, [s for s, _ in cons])
            values = [r for _, r in cons]
            block = []
            for e in range(n):
                x = solve(S, {e: Fraction(1)})
                if x is None:
                    raise ValueError(f"constraints do not determine the map on Omega^{p}_{w}")
                block.append(_combine(x, values))
            # every constraint must hold for the solved block
            for s, r in cons:
                got = _combine(s, block)
                if got != r:
                    raise ValueError(f"constraints on Omega^{p}_{w} are inconsistent")
            psi[(p, w)] = block
    return psi
