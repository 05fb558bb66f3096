"""Mixed complexes (b, B) and their cyclic totalizations.

Index convention, used everywhere in this package: a chain space ``M[n, w]``
has non-negative homological index ``n``; ``b`` lowers ``n`` by one and
``B`` raises it by one. Under the usual cohomological reading with all
complexes in non-positive degrees, ``M[n]`` sits in degree ``-n`` and both
operators then have degree -1 and +1 respectively in the opposite sense; no
other module repeats this conversion.

Totalizations, per weight ``w`` (finite since ``M[n, w] = 0`` for
``n > bound(w)``):

* negative cyclic: ``Tot_d = sum_{i >= 0} M[d + 2i]`` with differential
  ``b + B`` from ``Tot_d`` to ``Tot_{d-1}``. Degree 0 is the three-term
  complex ``sum M[odd] -> sum M[even] -> sum M[odd]``.
* periodic: ``Tot_even = sum M[even]``, ``Tot_odd = sum M[odd]``, same
  differential.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .exact_linear import CompositionNotZero, RatMatrix, block_matrix, homology_dim

MatrixFn = Callable[[int, int], RatMatrix]


class MixedComplex:
    """A weight-graded mixed complex given by dimension and matrix callbacks.

    ``b(n, w)`` must have shape ``(dim(n-1, w), dim(n, w))`` and ``B(n, w)``
    shape ``(dim(n+1, w), dim(n, w))``. Results are cached.
    """

    def __init__(self, dim: Callable[[int, int], int], b: MatrixFn, B: MatrixFn,
                 bound: Callable[[int], int], name: str = "M"):
        self._dim = dim
        self._b = b
        self._B = B
        self._bound = bound
        self.name = name
        self._cache: Dict[Tuple[str, int, int], RatMatrix] = {}

    def dim(self, n: int, w: int) -> int:
        if n < 0 or w < 0 or n > self.bound(w):
            return 0
        return self._dim(n, w)

    def bound(self, w: int) -> int:
        return self._bound(w)

    def b(self, n: int, w: int) -> RatMatrix:
        key = ("b", n, w)
        m = self._cache.get(key)
        if m is None:
            if n <= 0 or n > self.bound(w) or w < 0:
                m = RatMatrix.zeros(self.dim(n - 1, w), self.dim(n, w))
            else:
                m = self._b(n, w)
            self._check_shape(m, (self.dim(n - 1, w), self.dim(n, w)), "b", n, w)
            self._cache[key] = m
        return m

    def B(self, n: int, w: int) -> RatMatrix:
        key = ("B", n, w)
        m = self._cache.get(key)
        if m is None:
            if n < 0 or n >= self.bound(w) or w < 0:
                m = RatMatrix.zeros(self.dim(n + 1, w), self.dim(n, w))
            else:
                m = self._B(n, w)
            self._check_shape(m, (self.dim(n + 1, w), self.dim(n, w)), "B", n, w)
            self._cache[key] = m
        return m

    @staticmethod
    def _check_shape(m: RatMatrix, shape, label, n, w):
        if m.shape != shape:
            raise ValueError(f"{label}({n}, {w}) has shape {m.shape}, expected {shape}")

    def __repr__(self) -> str:
        return f"MixedComplex({self.name})"

    @classmethod
    def from_tables(cls, dims: Dict[Tuple[int, int], int], b: Dict[Tuple[int, int], RatMatrix],
                    B: Dict[Tuple[int, int], RatMatrix], name: str = "M") -> "MixedComplex":
        """Explicit finite mixed complex; missing matrices are zero."""

        def bound(w):
            ns = [n for (n, ww), d in dims.items() if ww == w and d]
            return max(ns) if ns else 0

        def dim(n, w):
            return dims.get((n, w), 0)

        def bm(n, w):
            return b.get((n, w), RatMatrix.zeros(dim(n - 1, w), dim(n, w)))

        def Bm(n, w):
            return B.get((n, w), RatMatrix.zeros(dim(n + 1, w), dim(n, w)))

        return cls(dim, bm, Bm, bound, name)


def unit_mixed_complex() -> MixedComplex:
    """Q in degree 0 and weight 0, with b = B = 0."""
    return MixedComplex.from_tables({(0, 0): 1}, {}, {}, name="unit")


def zero_mixed_complex() -> MixedComplex:
    return MixedComplex.from_tables({}, {}, {}, name="zero")


@dataclass
class MixedReport:
    checked: List[Tuple[int, int]] = field(default_factory=list)
    violations: List[Tuple[str, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_mixed_identities(M: MixedComplex, n_max: int, W: int) -> MixedReport:
    """Check b b = 0, B B = 0 and b B + B b = 0 exactly on ``n <= n_max``, ``w <= W``."""
    rep = MixedReport()
    for w in range(W + 1):
        for n in range(n_max + 1):
            rep.checked.append((n, w))
            if not (M.b(n - 1, w) @ M.b(n, w)).is_zero():
                rep.violations.append(("bb", n, w))
            if not (M.B(n + 1, w) @ M.B(n, w)).is_zero():
                rep.violations.append(("BB", n, w))
            if not (M.b(n + 1, w) @ M.B(n, w) + M.B(n - 1, w) @ M.b(n, w)).is_zero():
                rep.violations.append(("bB+Bb", n, w))
    return rep


# --- totalizations -------------------------------------------------------------------

def _negative_terms(M: MixedComplex, d: int, w: int) -> List[int]:
    top = M.bound(w)
    start = d if d >= 0 else d % 2
    return [n for n in range(start, top + 1, 2)]


def _total_differential(M: MixedComplex, src: List[int], dst: List[int], w: int) -> RatMatrix:
    pos = {n: k for k, n in enumerate(dst)}
    blocks = {}
    for j, n in enumerate(src):
        if n - 1 in pos:
            blocks[(pos[n - 1], j)] = M.b(n, w)
        if n + 1 in pos:
            blocks[(pos[n + 1], j)] = M.B(n, w)
    return block_matrix([M.dim(n, w) for n in dst], [M.dim(n, w) for n in src], blocks)


def negative_cyclic_differential(M: MixedComplex, d: int, w: int) -> RatMatrix:
    """``b + B`` from ``Tot_d`` to ``Tot_{d-1}`` of the negative cyclic totalization."""
    return _total_differential(M, _negative_terms(M, d, w), _negative_terms(M, d - 1, w), w)


def negative_cyclic_dim(M: MixedComplex, d: int, w: int) -> int:
    d_out = negative_cyclic_differential(M, d, w)
    d_in = negative_cyclic_differential(M, d + 1, w)
    try:
        return homology_dim(d_out, d_in)
    except CompositionNotZero as exc:
        raise CompositionNotZero(f"(b + B)^2 != 0 on {M.name} at total degree {d}, weight {w}") from exc


def periodic_differential(M: MixedComplex, parity: int, w: int) -> RatMatrix:
    top = M.bound(w)
    src = list(range(parity, top + 1, 2))
    dst = list(range(1 - parity, top + 1, 2))
    return _total_differential(M, src, dst, w)


def _parity(parity) -> int:
    if parity in ("even", 0):
        return 0
    if parity in ("odd", 1):
        return 1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def periodic_dim(M: MixedComplex, parity, w: int) -> int:
    par = _parity(parity)
    d_out = periodic_differential(M, par, w)
    d_in = periodic_differential(M, 1 - par, w)
    try:
        return homology_dim(d_out, d_in)
    except CompositionNotZero as exc:
        raise CompositionNotZero(f"(b + B)^2 != 0 on {M.name} in periodic parity {par}, weight {w}") from exc


def stable_degree(M: MixedComplex, parity, w: int) -> int:
    """A total degree of the given parity beyond which negative cyclic dims are constant."""
    par = _parity(parity)
    d = -2 * M.bound(w) - 2
    return d if d % 2 == par else d - 1


def ext_ku_table(d_max: int) -> Dict[int, int]:
    """Negative cyclic dims of the unit mixed complex for ``-d_max <= d <= d_max``."""
    U = unit_mixed_complex()
    return {d: negative_cyclic_dim(U, d, 0) for d in range(d_max, -d_max - 1, -1)}


def derham_mixed(D) -> MixedComplex:
    """The de Rham algebra as a mixed complex: M[n, w] = Omega^n_w, b = 0, B = epsilon."""

    def b(n, w):
        return RatMatrix.zeros(D.dim(n - 1, w), D.dim(n, w))

    return MixedComplex(D.dim, b, D.epsilon_matrix, D.bound, name=f"DR({D.A.presentation.describe()})")
