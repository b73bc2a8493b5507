"""Reduced simplicial homology with tracked cycle bases.

Chains are indexed by faces in lexicographic order within each degree; the
degree -1 slot holds the empty face so the augmentation is just ``∂_0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .complexes import SimplicialComplex, lex_key, popcount, verts
from .errors import InvariantViolation
from .linalg import QQ, ZZ, CoefficientSpec, EchelonPool, Matrix, _reduce_columns, invariant_factors

__all__ = [
    "ChainComplexData",
    "HomologyBasis",
    "chain_complex",
    "reduced_homology",
    "homology_ranks",
    "induced_homology_map",
    "integral_reduced_homology",
    "is_homology_sphere",
    "reduced_euler_characteristic",
]


class ChainComplexData:
    """Faces grouped by degree plus their boundary columns.

    ``faces[n + 1]`` lists the n-dimensional faces; ``index[n + 1]`` maps a
    face mask to its position.
    """

    __slots__ = ("faces", "index", "top")

    def __init__(self, faces: Iterable[int]):
        by_size: dict[int, list[int]] = {}
        for f in faces:
            by_size.setdefault(popcount(f), []).append(f)
        self.top = max(by_size) - 1 if by_size else -2
        self.faces = [sorted(by_size.get(k, []), key=lex_key) for k in range(self.top + 2)]
        self.index = [{f: i for i, f in enumerate(fl)} for fl in self.faces]

    def faces_in(self, n: int) -> list[int]:
        if n < -1 or n > self.top:
            return []
        return self.faces[n + 1]

    def boundary_columns(self, n: int, one=1) -> list[dict]:
        """Sparse columns of ``∂_n : C_n -> C_{n-1}`` (rows index faces of degree n-1)."""
        if n < 0 or n > self.top:
            return [{} for _ in self.faces_in(n)]
        idx = self.index[n]
        cols = []
        for f in self.faces[n + 1]:
            col = {}
            sign = one
            t = f
            while t:
                b = t & -t
                t ^= b
                col[idx[f ^ b]] = sign
                sign = -sign
            cols.append(col)
        return cols

    def boundary_matrix(self, n: int, spec: CoefficientSpec = QQ) -> Matrix:
        rows = len(self.faces_in(n - 1))
        cols = self.boundary_columns(n)
        return Matrix.from_columns([[c.get(i, 0) for i in range(rows)] for c in cols], rows, spec)


def chain_complex(K: SimplicialComplex) -> ChainComplexData:
    return ChainComplexData(K.faces)


class HomologyBasis:
    """Reduced homology over a field with chosen cycle representatives.

    For each degree ``n`` the representatives are cycles whose classes form a
    basis of ``H̃_n``; ``pools[n]`` holds boundaries followed by the
    representatives in echelon form, which makes coordinate solving a single
    reduction pass.
    """

    def __init__(self, chains: ChainComplexData, spec: CoefficientSpec):
        if not spec.is_field:
            raise ValueError("HomologyBasis needs a field; use integral_reduced_homology over Z")
        self.spec = spec
        self.chains = chains
        self.ranks: dict[int, int] = {}
        self.reps: dict[int, list[dict]] = {}
        self.pools: dict[int, EchelonPool] = {}
        self._rep_of_pool: dict[int, dict[int, int]] = {}
        one = spec.coerce(1)
        top = chains.top
        kernels: dict[int, list[dict]] = {}
        images: dict[int, list[dict]] = {}
        for n in range(-1, top + 1):
            cols = chains.boundary_columns(n, one)
            if spec.kind == "F":
                cols = [{r: x % spec.p for r, x in c.items()} for c in cols]
            reduced, transform, _ = _reduce_columns(cols, spec)
            kernels[n] = [transform[j] for j, c in enumerate(reduced) if not c]
            images[n - 1] = [c for c in reduced if c]
        for n in range(-1, top + 1):
            pool = EchelonPool(spec)
            for c in images.get(n, []):
                pool.insert(c)
            reps = []
            rep_of_pool = {}
            for z in kernels[n]:
                res, _ = pool.reduce(z, want_coords=False)
                if res:
                    k = pool.insert(res)
                    rep_of_pool[k] = len(reps)
                    reps.append(res)
            self.pools[n] = pool
            self.reps[n] = reps
            self.ranks[n] = len(reps)
            self._rep_of_pool[n] = rep_of_pool

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def degrees(self):
        return [n for n, r in sorted(self.ranks.items()) if r]

    def representatives(self, n: int) -> Matrix:
        rows = len(self.chains.faces_in(n))
        zero = self.spec.coerce(0)
        return Matrix.from_columns([[c.get(i, zero) for i in range(rows)] for c in self.reps.get(n, [])], rows, self.spec)

    def coordinates(self, n: int, cycle: dict) -> list:
        """Coordinates of a cycle (sparse over degree-n faces) in the rep basis."""
        pool = self.pools.get(n)
        r = self.rank(n)
        zero = self.spec.coerce(0)
        if pool is None:
            if cycle:
                raise InvariantViolation("nonzero chain in a degree with no faces")
            return [zero] * r
        res, coords = pool.reduce(cycle)
        if res:
            raise InvariantViolation(f"chain in degree {n} is not a cycle of the target complex")
        out = [zero] * r
        rp = self._rep_of_pool[n]
        for k, a in coords.items():
            j = rp.get(k)
            if j is not None:
                out[j] = a
        return out

    def push_forward(self, n: int, target: "HomologyBasis", sign=1) -> list[list]:
        """Matrix (rows: target reps, cols: own reps) of the map induced by the
        inclusion of face sets, scaled by ``sign``."""
        src_faces = self.chains.faces_in(n)
        tgt_index = target.chains.index[n + 1] if n + 1 < len(target.chains.index) else {}
        cols = []
        for rep in self.reps.get(n, []):
            vec = {}
            for i, a in rep.items():
                j = tgt_index.get(src_faces[i])
                if j is None:
                    raise InvariantViolation("source face missing from the target complex")
                vec[j] = a
            coords = target.coordinates(n, vec)
            if sign != 1:
                coords = [self.spec.coerce(sign * c) for c in coords]
            cols.append(coords)
        return [[cols[j][i] for j in range(len(cols))] for i in range(target.rank(n))]


def reduced_homology(K: SimplicialComplex | Iterable[int], coeff: CoefficientSpec = QQ) -> HomologyBasis:
    faces = K.faces if isinstance(K, SimplicialComplex) else K
    return HomologyBasis(ChainComplexData(faces), coeff)


# -- rank-only fast path -----------------------------------------------------

def _rank_f2(cols: list[int]) -> int:
    pivots: dict[int, int] = {}
    r = 0
    for c in cols:
        while c:
            h = c.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = c
                r += 1
                break
            c ^= p
    return r


def _boundary_ranks(chains: ChainComplexData, spec: CoefficientSpec) -> dict[int, int]:
    ranks = {}
    for n in range(0, chains.top + 1):
        if spec.kind == "F" and spec.p == 2:
            idx = chains.index[n]
            cols = []
            for f in chains.faces[n + 1]:
                c = 0
                t = f
                while t:
                    b = t & -t
                    t ^= b
                    c |= 1 << idx[f ^ b]
                cols.append(c)
            ranks[n] = _rank_f2(cols)
        else:
            cols = chains.boundary_columns(n)
            if spec.kind == "F":
                cols = [{r: x % spec.p for r, x in c.items()} for c in cols]
            pool = EchelonPool(spec)
            ranks[n] = sum(1 for c in cols if pool.add(c) is not None)
    return ranks


def homology_ranks(faces: Iterable[int] | SimplicialComplex, spec: CoefficientSpec = QQ) -> dict[int, int]:
    """``{n: rank H̃_n}`` for nonzero ranks only; the void complex gives ``{}``."""
    if isinstance(faces, SimplicialComplex):
        faces = faces.faces
    chains = ChainComplexData(faces)
    if chains.top < -1:
        return {}
    br = _boundary_ranks(chains, spec)
    out = {}
    for n in range(-1, chains.top + 1):
        r = len(chains.faces[n + 1]) - br.get(n, 0) - br.get(n + 1, 0)
        if r:
            out[n] = r
    return out


def induced_homology_map(K: SimplicialComplex, U, V, n: int, coeff: CoefficientSpec = QQ) -> Matrix:
    """Matrix of ``H̃_n(K_U) -> H̃_n(K_V)`` induced by inclusion (``U ⊆ V``)."""
    from .complexes import mask_of

    U = U if isinstance(U, int) else mask_of(U)
    V = V if isinstance(V, int) else mask_of(V)
    if U & ~V:
        raise ValueError("U must be a subset of V")
    hu = reduced_homology([f for f in K.faces if f & ~U == 0], coeff)
    hv = reduced_homology([f for f in K.faces if f & ~V == 0], coeff)
    rows = hu.push_forward(n, hv)
    return Matrix.from_rows(rows, coeff, ncols=hu.rank(n))


@dataclass(frozen=True)
class IntegralHomology:
    free: dict
    torsion: dict

    def torsion_primes(self) -> set[int]:
        out = set()
        for ts in self.torsion.values():
            for t in ts:
                out |= _prime_factors(t)
        return out

    def is_torsion_free(self) -> bool:
        return not any(self.torsion.values())


def _prime_factors(n: int) -> set[int]:
    out = set()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.add(d)
            n //= d
        d += 1
    if n > 1:
        out.add(n)
    return out


def integral_reduced_homology(K: SimplicialComplex | Iterable[int]) -> IntegralHomology:
    """``H̃_n(K; Z)`` as free rank plus torsion invariant factors, via SNF."""
    faces = K.faces if isinstance(K, SimplicialComplex) else K
    chains = ChainComplexData(faces)
    free: dict[int, int] = {}
    torsion: dict[int, list[int]] = {}
    factors: dict[int, list[int]] = {}
    for n in range(0, chains.top + 1):
        rows = len(chains.faces_in(n - 1))
        cols = chains.boundary_columns(n)
        dense = [[c.get(i, 0) for c in cols] for i in range(rows)]
        factors[n] = invariant_factors(dense) if rows and cols else []
    for n in range(-1, chains.top + 1):
        dim_c = len(chains.faces_in(n))
        r = dim_c - len(factors.get(n, [])) - len(factors.get(n + 1, []))
        t = [d for d in factors.get(n + 1, []) if d > 1]
        if r:
            free[n] = r
        if t:
            torsion[n] = t
    return IntegralHomology(free, torsion)


def is_homology_sphere(K: SimplicialComplex | Iterable[int], coeff: CoefficientSpec = QQ, dim: int | None = None) -> bool:
    """True iff homology is concentrated in the top degree with rank one."""
    faces = K.faces if isinstance(K, SimplicialComplex) else list(K)
    if not faces:
        return False
    if dim is None:
        dim = max(popcount(f) for f in faces) - 1
    if coeff.kind == "Z":
        h = integral_reduced_homology(faces)
        return h.free == {dim: 1} and h.is_torsion_free()
    return homology_ranks(faces, coeff) == {dim: 1}


def reduced_euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** (i - 1) * f for i, f in enumerate(K.f_vector))


def format_cycle(chains: ChainComplexData, n: int, vec: dict) -> str:
    terms = []
    faces = chains.faces_in(n)
    for i in sorted(vec):
        a = vec[i]
        terms.append(f"{a}*[{''.join(map(str, verts(faces[i]))) or '∅'}]")
    return " + ".join(terms) or "0"
