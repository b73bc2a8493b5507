"""Graded Betti numbers of Stanley–Reisner rings via Hochster's formula.

``β_{i,U}(k[K]) = dim H̃_{|U|-i-1}(K_U; k)``.  Full subcomplex homology is
memoized per (complex, coefficients) in :class:`SubcomplexHomology`, which the
strand and classification code share.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from .complexes import SimplicialComplex, is_simplex_boundary, popcount, verts
from .errors import CapExceeded, InvariantViolation, ValidationError
from .homology import ChainComplexData, HomologyBasis, _rank_f2, homology_ranks, integral_reduced_homology
from .linalg import QQ, CoefficientSpec, EchelonPool

DEFAULT_MAX_M = 24
DEFAULT_COKOSZUL_MAX_M = 16


@dataclass
class GradedBettiTable:
    """Betti numbers keyed by ``(i, multidegree)``.

    Multidegrees are vertex bitmasks for squarefree modules and exponent
    tuples for general monomial ideals.  ``module`` is ``"quotient"`` (S/I) or
    ``"ideal"`` (I).
    """

    module: str
    spec: CoefficientSpec
    multigraded: dict = field(default_factory=dict)
    coarse: dict = field(default_factory=dict)

    @classmethod
    def from_multigraded(cls, module: str, spec: CoefficientSpec, entries: dict, degree) -> "GradedBettiTable":
        coarse: Counter = Counter()
        for (i, b), v in entries.items():
            if v:
                coarse[(i, degree(b))] += v
        return cls(module, spec, {k: v for k, v in entries.items() if v}, dict(coarse))

    @property
    def projdim(self) -> int:
        return max((i for (i, _), v in self.coarse.items() if v), default=-1)

    @property
    def regularity(self) -> int | None:
        return max((j - i for (i, j), v in self.coarse.items() if v), default=None)

    def total(self, i: int) -> int:
        return sum(v for (ii, _), v in self.coarse.items() if ii == i)

    def ranks(self) -> tuple[int, ...]:
        return tuple(self.total(i) for i in range(self.projdim + 1))

    def degrees(self, i: int) -> list[int]:
        """Generator degrees in homological degree ``i`` with multiplicity."""
        out = []
        for (ii, j), v in sorted(self.coarse.items()):
            if ii == i:
                out += [j] * v
        return out

    def get(self, i: int, j: int) -> int:
        return self.coarse.get((i, j), 0)

    def shifted_to_ideal(self) -> "GradedBettiTable":
        if self.module != "quotient":
            raise ValidationError("only a quotient table can be shifted to its ideal")
        mg = {(i - 1, b): v for (i, b), v in self.multigraded.items() if i >= 1}
        co = {(i - 1, j): v for (i, j), v in self.coarse.items() if i >= 1}
        return GradedBettiTable("ideal", self.spec, mg, co)

    def shifted_to_quotient(self) -> "GradedBettiTable":
        if self.module != "ideal":
            raise ValidationError("only an ideal table can be shifted to its quotient")
        mg = {(i + 1, b): v for (i, b), v in self.multigraded.items()}
        co = {(i + 1, j): v for (i, j), v in self.coarse.items()}
        zero = 0
        if self.multigraded:
            sample = next(iter(self.multigraded))[1]
            zero = tuple(0 for _ in sample) if isinstance(sample, tuple) else 0
        mg[(0, zero)] = 1
        co[(0, 0)] = 1
        return GradedBettiTable("quotient", self.spec, mg, co)

    def is_linear_below(self, d: int, steps: int | float) -> bool:
        """``β_{i,j} = 0`` for ``j != i + d`` whenever ``i < steps`` (ideal tables)."""
        return all(j == i + d for (i, j), v in self.coarse.items() if v and i < steps)

    def first_nonlinear_step(self, d: int) -> int | None:
        bad = [i for (i, j), v in self.coarse.items() if v and j != i + d]
        return min(bad) if bad else None


class SubcomplexHomology:
    """Memoized homology of the full subcomplexes ``K_U`` over one field."""

    def __init__(self, K: SimplicialComplex, spec: CoefficientSpec):
        self.K = K
        self.spec = spec
        self._faces = K.faces
        self._ranks: dict[int, dict[int, int]] = {}
        self._bases: dict[int, HomologyBasis] = {}

    def faces(self, U: int) -> list[int]:
        return [f for f in self._faces if f & ~U == 0]

    def ranks(self, U: int) -> dict[int, int]:
        r = self._ranks.get(U)
        if r is None:
            r = homology_ranks(self.faces(U), self.spec)
            self._ranks[U] = r
        return r

    def basis(self, U: int) -> HomologyBasis:
        b = self._bases.get(U)
        if b is None:
            b = HomologyBasis(ChainComplexData(self.faces(U)), self.spec)
            self._bases[U] = b
            self._ranks.setdefault(U, {n: r for n, r in b.ranks.items() if r})
        return b

    def nonzero_subsets(self):
        """``(U, ranks)`` for all ``U`` with nonzero reduced homology, by popcount."""
        for U in subsets_by_size(self.K.m):
            r = self.ranks(U)
            if r:
                yield U, r


@lru_cache(maxsize=256)
def subcomplex_homology(K: SimplicialComplex, spec: CoefficientSpec) -> SubcomplexHomology:
    return SubcomplexHomology(K, spec)


@lru_cache(maxsize=32)
def subsets_by_size(m: int) -> tuple[int, ...]:
    return tuple(sorted(range(1 << m), key=lambda u: (popcount(u), u)))


def check_cap(m: int, cap: int | None, what="m (vertices enumerated over 2^m subsets)"):
    cap = DEFAULT_MAX_M if cap is None else cap
    if m > cap:
        raise CapExceeded(what, m, cap)


def multigraded_betti(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None) -> GradedBettiTable:
    """All ``β_{i,U}(k[K])`` by enumerating every ``U ⊆ [m]``."""
    check_cap(K.m, max_m)
    if not coeff.is_field:
        raise ValidationError("Betti numbers are computed over a field")
    sh = subcomplex_homology(K, coeff)
    entries = {}
    for U, ranks in sh.nonzero_subsets():
        size = popcount(U)
        for q, r in ranks.items():
            entries[(size - q - 1, U)] = r
    return GradedBettiTable.from_multigraded("quotient", coeff, entries, popcount)


def betti_table(K: SimplicialComplex, coeff: CoefficientSpec = QQ, module: str = "quotient",
                max_m: int | None = None) -> GradedBettiTable:
    t = multigraded_betti(K, coeff, max_m)
    if module == "ideal":
        return t.shifted_to_ideal()
    if module != "quotient":
        raise ValidationError(f"module must be 'quotient' or 'ideal', not {module!r}")
    return t


def hochster_degree(i: int, size: int) -> int:
    """Topological degree in H_*(Z_K) of a class counted by ``β_{i,U}``, ``|U| = size``."""
    return 2 * size - i


def cokoszul_homology_ranks(K: SimplicialComplex, coeff: CoefficientSpec = QQ,
                            max_m: int | None = None) -> dict[int, int]:
    """Ranks of ``H_d(R_*(K))`` computed from the squarefree co-Koszul complex.

    Basis ``v_I λ_J`` with ``I ∈ K``, ``I ∩ J = ∅`` in degree ``2|I| + |J|``;
    ``∂(v_I λ_J) = Σ_{i∈I} v_{I-i} λ_i ∧ λ_J``.  The differential preserves
    ``U = I ⊔ J`` so each multidegree is reduced separately.
    """
    check_cap(K.m, DEFAULT_COKOSZUL_MAX_M if max_m is None else max_m, "m (co-Koszul basis)")
    if not coeff.is_field:
        raise ValidationError("co-Koszul ranks are computed over a field")
    faces = K.faces
    total: Counter = Counter()
    for U in range(1 << K.m):
        by_size: dict[int, list[int]] = {}
        for f in faces:
            if f & ~U == 0:
                by_size.setdefault(popcount(f), []).append(f)
        if not by_size:
            continue
        size_u = popcount(U)
        index = {k: {f: n for n, f in enumerate(fs)} for k, fs in by_size.items()}
        rank_d: dict[int, int] = {}
        for k, fs in by_size.items():
            if k == 0:
                continue
            cols = []
            for I in fs:
                J = U & ~I
                col = {}
                t = I
                while t:
                    b = t & -t
                    t ^= b
                    # λ_i ∧ λ_J: sign from moving λ_i past the smaller indices of J
                    sign = -1 if popcount(J & (b - 1)) % 2 else 1
                    col[index[k - 1][I ^ b]] = sign
                cols.append(col)
            rank_d[k] = _field_rank(cols, coeff)
        for k, fs in by_size.items():
            d = size_u + k
            r = len(fs) - rank_d.get(k, 0) - rank_d.get(k + 1, 0)
            if r:
                total[d] += r
    return dict(sorted(total.items()))


def _field_rank(cols: list[dict], spec: CoefficientSpec) -> int:
    if spec.kind == "F" and spec.p == 2:
        return _rank_f2([sum(1 << r for r in c) for c in cols])
    if spec.kind == "F":
        cols = [{r: x % spec.p for r, x in c.items()} for c in cols]
    pool = EchelonPool(spec)
    return sum(1 for c in cols if pool.add(c) is not None)


def hochster_degree_ranks(table: GradedBettiTable) -> dict[int, int]:
    """Betti numbers regrouped by topological degree ``2j - i`` (matches co-Koszul)."""
    out: Counter = Counter()
    for (i, j), v in table.coarse.items():
        out[hochster_degree(i, j)] += v
    return dict(sorted(out.items()))


@dataclass(frozen=True)
class HomologicalInvariants:
    projdim_quotient: int
    projdim_ideal: int
    regularity: int | None
    top_betti_degrees: tuple


def homological_invariants(K_or_table, coeff: CoefficientSpec = QQ) -> HomologicalInvariants:
    t = K_or_table if isinstance(K_or_table, GradedBettiTable) else betti_table(K_or_table, coeff)
    p = t.projdim
    return HomologicalInvariants(p, p - 1, t.regularity, tuple(t.degrees(p)))


@dataclass(frozen=True)
class PoincarePairs:
    pairs: tuple  # ((a, b), multiplicity) with a <= b
    genus: int
    manifold_dim: int

    def expanded(self) -> list[tuple[int, int]]:
        out = []
        for pair, mult in self.pairs:
            out += [tuple(pair)] * mult
        return out


def poincare_sum_pairs(K: SimplicialComplex, coeff: CoefficientSpec = QQ) -> PoincarePairs:
    """Sphere-product pairs of the rational connected-sum model of ``Z_K``.

    Classes strictly between the unit and the fundamental class are paired by
    Poincaré duality in total dimension ``m + n`` (``n = dim K + 1``).
    """
    from .classify import is_gorenstein_star

    if not is_gorenstein_star(K, coeff):
        raise ValidationError("poincare_sum_pairs needs a Gorenstein* complex")
    if is_simplex_boundary(K):
        raise ValidationError("the boundary of a simplex has no sphere-product pairs")
    field_spec = QQ if coeff.kind == "Z" else coeff
    t = betti_table(K, field_spec)
    n = K.dim + 1
    top = K.m + n
    p = t.projdim
    counts: Counter = Counter()
    for (i, j), v in t.coarse.items():
        if 0 < i < p:
            counts[hochster_degree(i, j)] += v
    total = sum(counts.values())
    if total % 2:
        raise InvariantViolation(f"odd total rank {total} below the top class; Poincaré duality fails")
    pairs = []
    for d in sorted(counts):
        e = top - d
        if d < e:
            if counts[d] != counts.get(e, 0):
                raise InvariantViolation(f"degrees {d} and {e} have ranks {counts[d]} and {counts.get(e, 0)}")
            pairs.append(((d, e), counts[d]))
        elif d == e:
            if counts[d] % 2:
                raise InvariantViolation(f"odd rank {counts[d]} in the middle degree {d}")
            pairs.append(((d, d), counts[d] // 2))
        elif e not in counts:
            raise InvariantViolation(f"degree {d} has no dual partner in degree {e}")
    return PoincarePairs(tuple(pairs), total // 2, top)


def torsion_primes_of_subcomplexes(K: SimplicialComplex) -> frozenset[int]:
    """Primes dividing torsion in ``H̃_*(K_U; Z)`` for some ``U``."""
    return _torsion_primes(K)


@lru_cache(maxsize=256)
def _torsion_primes(K: SimplicialComplex) -> frozenset[int]:
    out: set[int] = set()
    faces = K.faces
    for U in range(1 << K.m):
        fs = [f for f in faces if f & ~U == 0]
        # graphs and lower have free homology
        if max(popcount(f) for f in fs) <= 2:
            continue
        out |= integral_reduced_homology(fs).torsion_primes()
    return frozenset(out)


def multidegree_label(U: int) -> str:
    return "".join(map(str, verts(U))) if all(v < 10 for v in verts(U)) else ",".join(map(str, verts(U)))
