"""Two-term cotangent complex of a graded complete intersection and its derived Sym.

For ``A = Q[x]/(f)`` with ``f`` a regular sequence, ``L = [A e_1..e_r -> A dx_1..dx_g]``
with ``e_j -> sum_i (d f_j / d x_i) dx_i``, ``e_j`` in degree 1 and the dx's
in degree 0. After the shift by one the dx's are odd (degree 1) and the
e's even (degree 2). Sym^p of the shifted complex is therefore, in total degree
``p + a``::

    Lambda^{p-a}(dx) (x) Sym^a(e)   with coefficients in A,

and the differential is the derivation sending ``e_j`` to ``df_j``. This is
the only place the parity rule is applied.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .derham import DeRhamAlgebra, sort_with_sign
from .exact_linear import RatMatrix, homology_dim, vec_iadd
from .graded_algebra import AlgebraError, GradedAlgebra, series_coefficients
from .hochschild import HochschildChains


class NotCompleteIntersection(AlgebraError):
    pass


def regular_sequence_check(A: GradedAlgebra, W: int) -> bool:
    """Hilbert series of A equals prod(1 - t^{d_j}) / prod(1 - t^{w_i}) through weight W."""
    pres = A.presentation
    degs = [pres.relation_weight(j) for j in range(len(pres.relations))]
    return A.hilbert_series(W) == series_coefficients(degs, A.weights, W)


def _multi_indices(r: int, a: int):
    """Exponent vectors of length r summing to a, in lex-descending order."""
    if r == 0:
        if a == 0:
            yield ()
        return
    for first in range(a, -1, -1):
        for rest in _multi_indices(r - 1, a - first):
            yield (first,) + rest


Key = Tuple[Tuple[int, ...], Tuple[int, ...], int]


class CotangentComplex:
    """``L_{A/Q}`` for a complete intersection presentation."""

    def __init__(self, A: GradedAlgebra, checked_through: Optional[int] = None, override: bool = False):
        self.A = A
        self.g = A.nvars
        pres = A.presentation
        self.r = len(pres.relations)
        self.relation_weights = [pres.relation_weight(j) for j in range(self.r)]
        self.checked_through = checked_through
        self.override = override
        self.jacobian = [[A.normal_form(f.derivative(i), weight=d - A.weights[i]) for i in range(self.g)]
                         for f, d in zip(pres.relations, self.relation_weights)]
        self._bases: Dict[Tuple[int, int, int], List[Key]] = {}
        self._d: Dict[Tuple[int, int, int], RatMatrix] = {}

    # --- the two-term complex itself -------------------------------------------------------

    def differential_matrix(self, w: int) -> RatMatrix:
        """``L_1 -> L_0`` in weight w (Sym^1 of the shifted complex)."""
        return self.sym_differential(1, 1, w)

    def h0_dim(self, w: int) -> int:
        d = self.differential_matrix(w)
        return homology_dim(RatMatrix.zeros(0, d.rows), d)

    def h1_dim(self, w: int) -> int:
        d = self.differential_matrix(w)
        return homology_dim(d, RatMatrix.zeros(d.cols, 0))

    # --- Sym^p of the shifted complex ------------------------------------------------------

    def _wt_dx(self, I) -> int:
        return sum(self.A.weights[i] for i in I)

    def _wt_e(self, alpha) -> int:
        return sum(a * d for a, d in zip(alpha, self.relation_weights))

    def sym_basis(self, p: int, a: int, w: int) -> List[Key]:
        """Basis of ``A (x) Lambda^{p-a}(dx) (x) Sym^a(e)`` in weight w: (I, alpha, k)."""
        key = (p, a, w)
        if key not in self._bases:
            out: List[Key] = []
            if 0 <= a <= p and p - a <= self.g:
                for I in combinations(range(self.g), p - a):
                    for alpha in _multi_indices(self.r, a):
                        v = w - self._wt_dx(I) - self._wt_e(alpha)
                        for k in range(self.A.dim(v)):
                            out.append((I, alpha, k))
            self._bases[key] = out
        return self._bases[key]

    def sym_differential(self, p: int, a: int, w: int) -> RatMatrix:
        """Differential from the ``(p, a)`` piece (degree p+a) to ``(p, a-1)``."""
        key = (p, a, w)
        m = self._d.get(key)
        if m is None:
            src = self.sym_basis(p, a, w)
            dst = self.sym_basis(p, a - 1, w) if a >= 1 else []
            index = {b: n for n, b in enumerate(dst)}
            cols = []
            A = self.A
            for I, alpha, k in src:
                col: Dict[int, Fraction] = {}
                v = w - self._wt_dx(I) - self._wt_e(alpha)
                for j, mult in enumerate(alpha):
                    if not mult:
                        continue
                    beta = alpha[:j] + (mult - 1,) + alpha[j + 1:]
                    for i, (wi, jac) in enumerate(self.jacobian[j]):
                        if not jac:
                            continue
                        sign, J = sort_with_sign((i,) + I)
                        if not sign:
                            continue
                        coeff = A.multiply(v, {k: Fraction(1)}, wi, jac)
                        for kk, c in coeff.items():
                            vec_iadd(col, {index[(J, beta, kk)]: c}, sign * mult)
                cols.append(col)
            m = RatMatrix.from_columns(len(dst), cols)
            self._d[key] = m
        return m

    def sym_shift_dim(self, p: int, n: int, w: int) -> int:
        """dim H_n(Sym^p(L[1]))_w."""
        a = n - p
        if a < 0 or a > p or p - a > self.g:
            return 0
        d_out = self.sym_differential(p, a, w)
        d_in = self.sym_differential(p, a + 1, w)
        return homology_dim(d_out, d_in)

    def __repr__(self) -> str:
        return f"CotangentComplex({self.A.presentation.describe()})"


def cotangent(A: GradedAlgebra, W: int = 8, override: bool = False) -> CotangentComplex:
    """Build L for a presentation whose relations pass the regular-sequence test through W."""
    if not regular_sequence_check(A, W):
        if not override:
            raise NotCompleteIntersection(
                f"{A.presentation.describe()} fails the complete-intersection Hilbert series test through weight {W}")
        return CotangentComplex(A, checked_through=None, override=True)
    return CotangentComplex(A, checked_through=W)


def sym_shift_dims(L: CotangentComplex, p: int, n: int, w: int) -> int:
    return L.sym_shift_dim(p, n, w)


@dataclass
class DerivedHKRRow:
    n: int
    w: int
    hh_dim: int
    sym_dims: Dict[int, int]

    @property
    def sym_total(self) -> int:
        return sum(self.sym_dims.values())

    @property
    def ok(self) -> bool:
        return self.hh_dim == self.sym_total


@dataclass
class DerivedHKRReport:
    algebra: str
    scope: str
    override: bool
    rows: List[DerivedHKRRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> List[DerivedHKRRow]:
        return [r for r in self.rows if not r.ok]


SCOPE_NOTE = "graded affine complete intersection over Q; two-term cotangent complex model only"


def derived_hkr_check(A: GradedAlgebra, n_max: int, W: int, override: bool = False,
                      H: Optional[HochschildChains] = None) -> DerivedHKRReport:
    """Compare HH_n of A with sum_p H_n(Sym^p(L[1])) for n <= n_max, w <= W."""
    L = cotangent(A, W=max(W, 1), override=override)
    H = H or HochschildChains(A)
    rep = DerivedHKRReport(A.presentation.describe(), SCOPE_NOTE, L.override)
    for n in range(n_max + 1):
        for w in range(W + 1):
            sym = {p: L.sym_shift_dim(p, n, w) for p in range((n + 1) // 2, n + 1)}
            rep.rows.append(DerivedHKRRow(n, w, H.hh_dim(n, w), sym))
    return rep


def kaehler_consistency(A: GradedAlgebra, W: int, L: Optional[CotangentComplex] = None,
                        D: Optional[DeRhamAlgebra] = None) -> List[Tuple[int, int, int]]:
    """``(w, dim H_0(L)_w, dim Omega^1_w)`` for every weight up to W."""
    L = L or CotangentComplex(A)
    D = D or DeRhamAlgebra(A)
    return [(w, L.h0_dim(w), D.dim(1, w)) for w in range(W + 1)]
