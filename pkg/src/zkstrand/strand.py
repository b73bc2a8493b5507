"""Sweep action on the Hochster decomposition and the quasi-linear strand.

``λ_j : H̃_q(K_U) -> H̃_q(K_{U∪j})`` is the inclusion map scaled by
``(-1)^{ε(j,U)+q+1}`` where ``ε(j,U) = #{u ∈ U : u < j}``.  The strand is
seeded by the missing-face classes and closed under all ``λ_j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .complexes import SimplicialComplex, deletion, is_simplex, popcount, verts
from .errors import ValidationError
from .hochster import betti_table, check_cap, subcomplex_homology, subsets_by_size, torsion_primes_of_subcomplexes
from .linalg import QQ, CoefficientSpec, EchelonPool, GF, Matrix

Z_FLOOR_PRIMES = (2, 3)


def epsilon(I: int, U: int) -> int:
    """``ε(I, U) = #{(i, u) ∈ I × U : i > u}`` on bitmasks."""
    total = 0
    t = I
    while t:
        b = t & -t
        t ^= b
        total += popcount(U & (b - 1))
    return total


def sweep_sign(j: int, U: int, q: int) -> int:
    """Sign of ``λ_j`` on ``H̃_q(K_U)``; ``j`` is a 1-based vertex."""
    return -1 if (epsilon(1 << (j - 1), U) + q + 1) % 2 else 1


def sweep_map(K: SimplicialComplex, U: int, j: int, q: int, coeff: CoefficientSpec = QQ) -> Matrix:
    """Matrix of ``λ_j`` on ``H̃_q(K_U)`` in the stored homology bases."""
    sh = subcomplex_homology(K, coeff)
    src = sh.basis(U)
    bit = 1 << (j - 1)
    if U & bit:
        r = src.rank(q)
        return Matrix.zeros(r, r, coeff)
    tgt = sh.basis(U | bit)
    rows = src.push_forward(q, tgt, sweep_sign(j, U, q))
    return Matrix.from_rows(rows, coeff, ncols=src.rank(q))


@dataclass
class StrandSubspaces:
    """Strand subspaces per ``(U, q)`` as coordinate vectors in the homology basis of ``K_U``."""

    K: SimplicialComplex
    spec: CoefficientSpec
    subspaces: dict = field(default_factory=dict)  # (U, q) -> EchelonPool
    ambient: dict = field(default_factory=dict)  # U -> {q: rank}

    def dim(self, U: int, q: int) -> int:
        pool = self.subspaces.get((U, q))
        return len(pool) if pool is not None else 0

    def basis(self, U: int, q: int) -> list[dict]:
        pool = self.subspaces.get((U, q))
        return [] if pool is None else list(pool.columns)

    def dimension_table(self) -> dict:
        """``{(i, U): dim}`` with ``i = |U| - q - 1`` (homological degree of k[K])."""
        return {(popcount(U) - q - 1, U): len(p) for (U, q), p in self.subspaces.items() if len(p)}

    def coarse(self) -> dict:
        out: dict = {}
        for (i, U), d in self.dimension_table().items():
            out[(i, popcount(U))] = out.get((i, popcount(U)), 0) + d
        return out

    def deficits(self, proper_only: bool = False, i_range=None):
        """Yield ``(i, U, q, strand_dim, betti)`` where the strand is not all of homology."""
        full = self.K.full_mask
        for U, ranks in self.ambient.items():
            if U == 0 or (proper_only and U == full):
                continue
            for q, r in ranks.items():
                i = popcount(U) - q - 1
                if i_range is not None and not (i_range[0] <= i < i_range[1]):
                    continue
                d = self.dim(U, q)
                if d != r:
                    yield i, U, q, d, r


def quasi_linear_strand(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None,
                        stop=None) -> StrandSubspaces:
    """Single monotone pass over subsets by increasing size.

    ``stop(U, q, dim, rank)`` may return True to abort early once ``U`` is final;
    the partial result is returned.
    """
    check_cap(K.m, max_m)
    if not coeff.is_field:
        raise ValidationError("the strand is computed over a field")
    sh = subcomplex_homology(K, coeff)
    mf = set(K.minimal_nonfaces)
    out = StrandSubspaces(K, coeff)
    for U in subsets_by_size(K.m):
        ranks = sh.ranks(U)
        if not ranks or U == 0:
            if U == 0:
                out.ambient[U] = dict(ranks)
            continue
        out.ambient[U] = dict(ranks)
        basis_u = None
        pools: dict[int, EchelonPool] = {}
        if U in mf:
            q = popcount(U) - 2
            pools[q] = EchelonPool(coeff)
            pools[q].add({0: coeff.coerce(1)})
        t = U
        while t:
            b = t & -t
            t ^= b
            W = U ^ b
            j = b.bit_length()
            for q in ranks:
                src = out.subspaces.get((W, q))
                if src is None or not len(src):
                    continue
                pool = pools.setdefault(q, EchelonPool(coeff))
                if len(pool) == ranks[q]:
                    continue
                if basis_u is None:
                    basis_u = sh.basis(U)
                _push_into(sh.basis(W), basis_u, q, src.columns, sweep_sign(j, W, q), pool, coeff)
        for q, pool in pools.items():
            if len(pool):
                out.subspaces[(U, q)] = pool
        if stop is not None:
            for q, r in ranks.items():
                if stop(U, q, out.dim(U, q), r):
                    return out
    return out


def _push_into(src_basis, tgt_basis, q, vectors, sign, pool, spec):
    """Add the images of coordinate ``vectors`` (in ``src_basis``) to ``pool``."""
    src_faces = src_basis.chains.faces_in(q)
    tgt_index = tgt_basis.chains.index[q + 1]
    reps = src_basis.reps[q]
    add = spec.coerce
    for v in vectors:
        chain: dict = {}
        for k, a in v.items():
            for face_i, c in reps[k].items():
                j = tgt_index[src_faces[face_i]]
                chain[j] = add(chain.get(j, 0) + a * c)
        chain = {j: c for j, c in chain.items() if c}
        coords = tgt_basis.coordinates(q, chain)
        vec = {k: add(sign * c) for k, c in enumerate(coords) if c}
        if vec:
            pool.add(vec)
        if len(pool) == tgt_basis.rank(q):
            return


def _field_list(K: SimplicialComplex, coeff: CoefficientSpec, floor=Z_FLOOR_PRIMES) -> list[CoefficientSpec]:
    if coeff.kind != "Z":
        return [coeff]
    primes = sorted(set(floor) | torsion_primes_of_subcomplexes(K))
    return [QQ] + [GF(p) for p in primes]


def z_fields(K: SimplicialComplex, coeff: CoefficientSpec, floor=Z_FLOOR_PRIMES) -> list[CoefficientSpec]:
    """Fields that certify a statement over ``coeff`` (itself unless it is Z)."""
    return _field_list(K, coeff, floor)


def is_quasi_koszul(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None) -> bool:
    """HMF: the strand is all of ``H̃_*(K_U)`` for every nonempty ``U``.

    The zero ideal (``K`` a full simplex) is reported False: there is no
    module to classify.
    """
    if is_simplex(K):
        return False
    return all(_is_qk_field(K, f, max_m) for f in _field_list(K, coeff))


def _is_qk_field(K, coeff, max_m):
    failed = []

    def stop(U, q, d, r):
        if U and d != r:
            failed.append(U)
            return True
        return False

    quasi_linear_strand(K, coeff, max_m, stop)
    return not failed


is_hmf = is_quasi_koszul


def is_almost_quasi_koszul(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None,
                           gorenstein_star: bool = False) -> bool:
    """Strand contains everything in homological degrees ``1 <= i < projdim k[K]``.

    With ``gorenstein_star=True`` (caller has certified it) the check is
    strand fullness on every nonempty proper ``U``.
    """
    if is_simplex(K):
        return False
    for f in _field_list(K, coeff):
        if gorenstein_star:
            ok = proper_subset_strand_full(K, f, max_m)
        else:
            ok = _is_aqk_field(K, f, max_m)
        if not ok:
            return False
    return True


def _is_aqk_field(K, coeff, max_m):
    p = betti_table(K, coeff, max_m=max_m).projdim
    failed = []

    def stop(U, q, d, r):
        i = popcount(U) - q - 1
        if 1 <= i < p and d != r:
            failed.append(U)
            return True
        return False

    quasi_linear_strand(K, coeff, max_m, stop)
    return not failed


def proper_subset_strand_full(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None) -> bool:
    full = K.full_mask
    failed = []

    def stop(U, q, d, r):
        if U and U != full and d != r:
            failed.append(U)
            return True
        return False

    for f in _field_list(K, coeff):
        quasi_linear_strand(K, f, max_m, stop)
        if failed:
            return False
    return True


def deletion_criterion(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None) -> bool:
    """``K ∖ i`` is quasi-Koszul for every vertex ``i``.

    Deleting a vertex may leave a full simplex (e.g. from ``∂Δ``); its ideal is
    zero and the quasi-Koszul condition holds vacuously there.
    """
    for i in verts(K.vertex_mask):
        D = deletion(K, i)
        if is_simplex(D):
            continue
        if not is_quasi_koszul(D, coeff, max_m):
            return False
    return True
