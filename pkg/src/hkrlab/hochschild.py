"""Normalized Hochschild chains of a connected graded commutative algebra.

``C[n, w]`` is the weight-``w`` part of ``A (x) Abar^{(x) n}`` where ``Abar``
is the augmentation ideal. A basis tensor is a tuple of ``(weight, k)``
slots, ``k`` indexing :meth:`GradedAlgebra.weight_basis`. Every ``Abar`` slot
has weight at least one, which makes ``C[n, w]`` vanish for ``n > w``.

Operators:

* ``b(a0 ... an) = sum_{i<n} (-1)^i (.. a_i a_{i+1} ..) + (-1)^n (a_n a_0, a_1 .. a_{n-1})``
* ``B(a0 ... an) = sum_i (-1)^{n i} (1, a_i .. a_n, a_0 .. a_{i-1})``, zero when ``a0`` is a scalar
* the shuffle product, and the antisymmetrization map from forms (no 1/n!).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .derham import DeRhamAlgebra, permutation_sign, sort_with_sign
from .exact_linear import (QuotientSpace, RatMatrix, Vec, homology_dim, kernel_basis, rank, solve,
                           vec_add, vec_iadd, vec_scale)
from .graded_algebra import GradedAlgebra
from .mixed_complex import MixedComplex

Slot = Tuple[int, int]
Tensor = Tuple[Slot, ...]
Chain = Vec


def _compositions(total: int, parts: int, minimum: int):
    """Ordered tuples of ``parts`` integers >= minimum summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total - minimum * (parts - 1) + 1):
        for rest in _compositions(total - first, parts - 1, minimum):
            yield (first,) + rest


@lru_cache(maxsize=None)
def shuffles(p: int, q: int) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
    """All (p, q)-shuffles as ``(sign, order)``.

    ``order`` lists, for each output position, the input position in the
    concatenation of the two sequences.
    """
    out = []
    for first in combinations(range(p + q), p):
        fs = set(first)
        order = [0] * (p + q)
        i = j = 0
        for pos in range(p + q):
            if pos in fs:
                order[pos] = i
                i += 1
            else:
                order[pos] = p + j
                j += 1
        out.append((permutation_sign(order), tuple(order)))
    return tuple(out)


class HochschildChains:
    """Normalized cyclic bar complex of ``A`` with cached b and B matrices."""

    def __init__(self, A: GradedAlgebra):
        self.A = A
        self._bases: Dict[Tuple[int, int], List[Tensor]] = {}
        self._index: Dict[Tuple[int, int], Dict[Tensor, int]] = {}
        self._b: Dict[Tuple[int, int], RatMatrix] = {}
        self._B: Dict[Tuple[int, int], RatMatrix] = {}
        self._min = A.min_weight or 1

    # --- bases ---------------------------------------------------------------------

    def bound(self, w: int) -> int:
        if w <= 0 or self.A.min_weight is None:
            return 0
        return w // self._min

    def chain_basis(self, n: int, w: int) -> List[Tensor]:
        key = (n, w)
        if key not in self._bases:
            A = self.A
            basis: List[Tensor] = []
            if n >= 0 and w >= 0:
                for w0 in range(0, w + 1):
                    d0 = A.dim(w0)
                    if not d0:
                        continue
                    for comp in _compositions(w - w0, n, 1):
                        dims = [A.dim(c) for c in comp]
                        if not all(dims):
                            continue
                        for ks in product(range(d0), *(range(d) for d in dims)):
                            basis.append(((w0, ks[0]),) + tuple(zip(comp, ks[1:])))
            self._bases[key] = basis
            self._index[key] = {t: i for i, t in enumerate(basis)}
        return self._bases[key]

    def dim(self, n: int, w: int) -> int:
        return len(self.chain_basis(n, w))

    def index(self, n: int, w: int) -> Dict[Tensor, int]:
        self.chain_basis(n, w)
        return self._index[(n, w)]

    def expand(self, n: int, w: int, slots: Sequence[Tuple[int, Vec]], coeff=1) -> Chain:
        """The chain ``coeff * s_0 (x) ... (x) s_n`` for slot vectors ``(weight, coords)``."""
        if any(not v for _, v in slots):
            return {}
        if any(wt <= 0 for wt, _ in slots[1:]):
            return {}
        idx = self.index(n, w)
        out: Chain = {}
        weights = [wt for wt, _ in slots]
        for combo in product(*(v.items() for _, v in slots)):
            c = coeff
            ks = []
            for k, x in combo:
                c = c * x
                ks.append(k)
            t = tuple(zip(weights, ks))
            j = idx[t]
            s = out.get(j, 0) + c
            if s:
                out[j] = s
            else:
                out.pop(j, None)
        return out

    def element(self, n: int, w: int, tensors: Dict[Tensor, object]) -> Chain:
        idx = self.index(n, w)
        return {idx[t]: Fraction(c) for t, c in tensors.items() if c}

    # --- b and B -----------------------------------------------------------------------

    def _b_basis(self, t: Tensor) -> Chain:
        A = self.A
        n = len(t) - 1
        w = sum(s[0] for s in t)
        idx = self.index(n - 1, w)
        out: Chain = {}
        for i in range(n + 1):
            if i < n:
                (v, a), (u, c) = t[i], t[i + 1]
                prod = A.basis_product(v, a, u, c)
                sign = -1 if i % 2 else 1
                for k, x in prod.items():
                    new = t[:i] + ((v + u, k),) + t[i + 2:]
                    j = idx[new]
                    vec_iadd(out, {j: x}, sign)
            else:
                (v, a), (u, c) = t[n], t[0]
                prod = A.basis_product(v, a, u, c)
                sign = -1 if n % 2 else 1
                for k, x in prod.items():
                    new = ((v + u, k),) + t[1:n]
                    j = idx[new]
                    vec_iadd(out, {j: x}, sign)
        return out

    def _B_basis(self, t: Tensor) -> Chain:
        n = len(t) - 1
        if t[0][0] == 0:
            return {}
        w = sum(s[0] for s in t)
        idx = self.index(n + 1, w)
        out: Chain = {}
        one = (0, 0)
        for i in range(n + 1):
            new = (one,) + t[i:] + t[:i]
            sign = -1 if (n * i) % 2 else 1
            vec_iadd(out, {idx[new]: Fraction(1)}, sign)
        return out

    def boundary_b(self, n: int, w: int) -> RatMatrix:
        """Matrix of b: C[n, w] -> C[n-1, w]."""
        key = (n, w)
        m = self._b.get(key)
        if m is None:
            basis = self.chain_basis(n, w)
            rows = self.dim(n - 1, w)
            if n <= 0:
                m = RatMatrix.zeros(rows, len(basis))
            else:
                m = RatMatrix.from_columns(rows, [self._b_basis(t) for t in basis])
            self._b[key] = m
        return m

    def connes_B(self, n: int, w: int) -> RatMatrix:
        """Matrix of B: C[n, w] -> C[n+1, w]."""
        key = (n, w)
        m = self._B.get(key)
        if m is None:
            basis = self.chain_basis(n, w)
            m = RatMatrix.from_columns(self.dim(n + 1, w), [self._B_basis(t) for t in basis])
            self._B[key] = m
        return m

    def b(self, n: int, w: int, x: Chain) -> Chain:
        return self.boundary_b(n, w).apply(x)

    def B(self, n: int, w: int, x: Chain) -> Chain:
        return self.connes_B(n, w).apply(x)

    # --- shuffle product -----------------------------------------------------------------

    def shuffle_basis(self, s: Tensor, t: Tensor) -> Chain:
        A = self.A
        p, q = len(s) - 1, len(t) - 1
        (v, a), (u, c) = s[0], t[0]
        head = A.basis_product(v, a, u, c)
        if not head:
            return {}
        w = sum(x[0] for x in s) + sum(x[0] for x in t)
        idx = self.index(p + q, w)
        tail = s[1:] + t[1:]
        out: Chain = {}
        for sign, order in shuffles(p, q):
            body = tuple(tail[k] for k in order)
            for k, x in head.items():
                j = idx[((v + u, k),) + body]
                vec_iadd(out, {j: x}, sign)
        return out

    def shuffle(self, p: int, v: int, x: Chain, q: int, u: int, y: Chain) -> Chain:
        """Shuffle product of ``x`` in C[p, v] with ``y`` in C[q, u], landing in C[p+q, v+u]."""
        bx = self.chain_basis(p, v)
        by = self.chain_basis(q, u)
        out: Chain = {}
        for i, a in x.items():
            for j, c in y.items():
                vec_iadd(out, self.shuffle_basis(bx[i], by[j]), a * c)
        return out

    def unit(self) -> Chain:
        return {0: Fraction(1)}

    # --- homology --------------------------------------------------------------------------

    def hh_dim(self, n: int, w: int) -> int:
        return homology_dim(self.boundary_b(n, w), self.boundary_b(n + 1, w))

    def render(self, n: int, w: int, x: Chain) -> str:
        """Human-readable form of a chain, e.g. ``1*(x|y) - 1*(1|x^2)``."""
        names = self.A.presentation.names
        basis = self.chain_basis(n, w)
        parts = []
        for j in sorted(x):
            slots = []
            for wt, k in basis[j]:
                mono = self.A.weight_basis(wt)[k]
                fs = [nm if e == 1 else f"{nm}^{e}" for nm, e in zip(names, mono) if e]
                slots.append("*".join(fs) or "1")
            parts.append(f"{x[j]}*({'|'.join(slots)})")
        return " + ".join(parts) or "0"

    def __repr__(self) -> str:
        return f"HochschildChains({self.A.presentation.describe()})"


def chain_basis(H: HochschildChains, n: int, w: int) -> List[Tensor]:
    return H.chain_basis(n, w)


def boundary_b(H: HochschildChains, n: int, w: int) -> RatMatrix:
    return H.boundary_b(n, w)


def connes_B(H: HochschildChains, n: int, w: int) -> RatMatrix:
    return H.connes_B(n, w)


def hh_dim(H: HochschildChains, n: int, w: int) -> int:
    return H.hh_dim(n, w)


def hochschild_mixed(H: HochschildChains) -> MixedComplex:
    return MixedComplex(H.dim, H.boundary_b, H.connes_B, H.bound,
                        name=f"HH({H.A.presentation.describe()})")


# --- HKR ---------------------------------------------------------------------------------

def hkr_matrix(H: HochschildChains, D: DeRhamAlgebra, n: int, w: int) -> RatMatrix:
    """Antisymmetrization ``a0 dx_I -> sum_sigma sgn(sigma) a0 (x) x_{I sigma}`` on Omega^n_w."""
    if H.A is not D.A:
        raise ValueError("Hochschild chains and de Rham algebra use different algebras")
    A = H.A
    gens = [A.generator(i) for i in range(A.nvars)]
    cols = []
    for I, k in D.basis(n, w):
        v0 = w - sum(A.weights[i] for i in I)
        col: Chain = {}
        for perm in permutations(range(n)):
            sign = permutation_sign(perm)
            slots = [(v0, {k: Fraction(1)})] + [gens[I[s]] for s in perm]
            vec_iadd(col, H.expand(n, w, slots), sign)
        cols.append(col)
    return RatMatrix.from_columns(H.dim(n, w), cols)


@dataclass
class HKRRow:
    n: int
    w: int
    omega_dim: int
    hh_dim: int
    lands_in_cycles: bool
    induced_rank: int
    multiplicative: bool
    multiplicative_up_to_boundary: bool

    @property
    def dims_match(self) -> bool:
        return self.omega_dim == self.hh_dim

    @property
    def isomorphism(self) -> bool:
        return self.lands_in_cycles and self.induced_rank == self.omega_dim == self.hh_dim

    @property
    def ok(self) -> bool:
        return self.dims_match and self.isomorphism and self.multiplicative


@dataclass
class HKRReport:
    algebra: str
    rows: List[HKRRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> List[HKRRow]:
        return [r for r in self.rows if not r.ok]


def hkr_check(A: GradedAlgebra, n_max: int, W: int, H: Optional[HochschildChains] = None,
              D: Optional[DeRhamAlgebra] = None) -> HKRReport:
    """Compare forms and Hochschild homology through the antisymmetrization map.

    Per ``(n, w)``: dimension equality, cycle condition, injectivity on
    homology (rank of hkr images modulo boundaries), and exact
    multiplicativity ``hkr(a ^ b) == shuffle(hkr a, hkr b)`` on all pairs of
    basis forms whose degrees and weights add up to ``(n, w)``. For
    non-smooth inputs mismatches are recorded, not raised.
    """
    H = H or HochschildChains(A)
    D = D or DeRhamAlgebra(A)
    report = HKRReport(A.presentation.describe())
    for n in range(n_max + 1):
        for w in range(W + 1):
            h = hkr_matrix(H, D, n, w)
            bn = H.boundary_b(n, w)
            bn1 = H.boundary_b(n + 1, w)
            cycles = (bn @ h).is_zero()
            # rank of [hkr | boundaries] minus rank of boundaries
            joined = RatMatrix.from_columns(H.dim(n, w), h.columns() + bn1.columns())
            induced = rank(joined) - rank(bn1)
            exact, up_to = _hkr_multiplicative(H, D, n, w, bn1)
            report.rows.append(HKRRow(n, w, D.dim(n, w), H.hh_dim(n, w), cycles, induced, exact, up_to))
    return report


def _hkr_multiplicative(H, D, n, w, boundaries: RatMatrix) -> Tuple[bool, bool]:
    exact = True
    up_to = True
    for p in range(n + 1):
        q = n - p
        for v in range(w + 1):
            u = w - v
            dp, dq = D.dim(p, v), D.dim(q, u)
            if not dp or not dq:
                continue
            hp, hq, hn = hkr_matrix(H, D, p, v), hkr_matrix(H, D, q, u), hkr_matrix(H, D, n, w)
            hp_cols, hq_cols = hp.columns(), hq.columns()
            for i in range(dp):
                for j in range(dq):
                    wedge = D.wedge(p, v, {i: Fraction(1)}, q, u, {j: Fraction(1)})
                    lhs = hn.apply(wedge)
                    rhs = H.shuffle(p, v, hp_cols[i], q, u, hq_cols[j])
                    if lhs != rhs:
                        exact = False
                        if solve(boundaries, vec_add(lhs, rhs, -1)) is None:
                            up_to = False
    return exact, up_to


# --- compatibility of B with the shuffle product ------------------------------------------------

@dataclass
class DefectWitness:
    u: Tuple[int, int, str]
    v: Tuple[int, int, str]
    defect: str


@dataclass
class BoundaryWitness:
    u: Tuple[int, int, Chain]
    v: Tuple[int, int, Chain]
    degree: int
    weight: int
    defect: Chain
    primitive: Optional[Chain]

    @property
    def ok(self) -> bool:
        return self.primitive is not None


@dataclass
class BSuiteReport:
    algebra: str
    defect_witnesses: List[DefectWitness] = field(default_factory=list)
    boundary_witnesses: List[BoundaryWitness] = field(default_factory=list)
    lambdas: Dict[int, Optional[Fraction]] = field(default_factory=dict)
    lambda_consistent: Dict[int, bool] = field(default_factory=dict)

    @property
    def defect_found(self) -> bool:
        return bool(self.defect_witnesses)

    @property
    def all_defects_bound(self) -> bool:
        return all(w.ok for w in self.boundary_witnesses)

    @property
    def ok(self) -> bool:
        return self.defect_found and self.all_defects_bound and all(self.lambda_consistent.values())


def leibniz_defect(H: HochschildChains, p: int, v: int, x: Chain, q: int, u: int, y: Chain) -> Chain:
    """``B(x*y) - B(x)*y - (-1)^p x*B(y)``."""
    xy = H.shuffle(p, v, x, q, u, y)
    lhs = H.B(p + q, v + u, xy)
    t1 = H.shuffle(p + 1, v, H.B(p, v, x), q, u, y)
    t2 = H.shuffle(p, v, x, q + 1, u, H.B(q, u, y))
    return vec_add(vec_add(lhs, t1, -1), t2, -1 if p % 2 == 0 else 1)


def b_compatibility_suite(A: GradedAlgebra, n_max: int, W: int, max_witnesses: int = 3,
                          max_pairs: int = 200, H: Optional[HochschildChains] = None,
                          D: Optional[DeRhamAlgebra] = None) -> BSuiteReport:
    """Probe how far B is from being a derivation of the shuffle product.

    1. Chain level: basis chains ``u, v`` with a nonzero Leibniz defect.
    2. Homology level: for pairs of cycles the defect is solved as ``b(z)``.
    3. For each n, the scalar ``lambda_n`` with ``[B hkr(w)] = lambda_n [hkr(d w)]``.
    """
    H = H or HochschildChains(A)
    D = D or DeRhamAlgebra(A)
    rep = BSuiteReport(A.presentation.describe())

    grid = [(p, v) for p in range(n_max + 1) for v in range(W + 1) if H.dim(p, v)]

    # 1. chain-level witnesses
    for (p, v), (q, u) in product(grid, grid):
        if len(rep.defect_witnesses) >= max_witnesses:
            break
        if p + q + 1 > n_max or v + u > W:
            continue
        for i in range(H.dim(p, v)):
            for j in range(H.dim(q, u)):
                x, y = {i: Fraction(1)}, {j: Fraction(1)}
                dfct = leibniz_defect(H, p, v, x, q, u, y)
                if dfct:
                    rep.defect_witnesses.append(DefectWitness(
                        (p, v, H.render(p, v, x)), (q, u, H.render(q, u, y)),
                        H.render(p + q + 1, v + u, dfct)))
                    break
            else:
                continue
            break

    # 2. cycles: the defect must be a boundary
    cycles = {(p, v): kernel_basis(H.boundary_b(p, v)) for p, v in grid}
    count = 0
    for (p, v), (q, u) in product(grid, grid):
        if p + q + 2 > n_max + 1 or v + u > W:
            continue
        for x in cycles[(p, v)]:
            for y in cycles[(q, u)]:
                if count >= max_pairs:
                    break
                count += 1
                dfct = leibniz_defect(H, p, v, x, q, u, y)
                n, w = p + q + 1, v + u
                prim = solve(H.boundary_b(n + 1, w), dfct)
                rep.boundary_witnesses.append(BoundaryWitness((p, v, x), (q, u, y), n, w, dfct, prim))

    # 3. lambda_n
    for n in range(n_max):
        values = set()
        for w in range(W + 1):
            if not D.dim(n, w) or not D.dim(n + 1, w):
                continue
            hn, hn1 = hkr_matrix(H, D, n, w), hkr_matrix(H, D, n + 1, w)
            homology = QuotientSpace(H.dim(n + 1, w), H.boundary_b(n + 2, w).columns())
            for k in range(D.dim(n, w)):
                form = {k: Fraction(1)}
                x = homology.reduce(H.B(n, w, hn.apply(form)))
                y = homology.reduce(hn1.apply(D.epsilon(n, w, form)))
                if not y:
                    values.add(None if not x else "inconsistent")
                    continue
                lead = min(y)
                lam = x.get(lead, Fraction(0)) / y[lead]
                values.add(lam if vec_scale(y, lam) == x else "inconsistent")
        numeric = {v for v in values if isinstance(v, Fraction)}
        rep.lambdas[n] = next(iter(numeric)) if len(numeric) == 1 else None
        rep.lambda_consistent[n] = "inconsistent" not in values and len(numeric) <= 1
    return rep
