"""Simplicial complexes on a vertex set ``[m] = {1, ..., m}`` stored as bitmasks.

Vertex ``i`` corresponds to bit ``i - 1``.  A complex is stored by its facets;
faces and minimal non-faces are derived lazily and cached.  The empty complex
``{∅}`` has the single facet ``0``; the void complex (no faces at all) has no
facets and only arises internally (e.g. upper Koszul complexes).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .errors import ValidationError

DEFAULT_MAX_VERTICES = 64


# -- bitmask helpers ---------------------------------------------------------

def mask_of(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << (v - 1)
    return out


def verts(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lex_key(mask: int):
    return verts(mask)


def submasks(mask: int):
    """All submasks of ``mask`` including 0 and ``mask`` itself."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def fmt(mask: int) -> str:
    vs = verts(mask)
    if not vs:
        return "∅"
    sep = "" if max(vs) < 10 else ","
    return sep.join(map(str, vs))


def _maximal(masks: Iterable[int]) -> list[int]:
    ms = sorted(set(masks), key=popcount, reverse=True)
    out: list[int] = []
    for s in ms:
        if not any(s & ~f == 0 for f in out):
            out.append(s)
    return out


def _compress(mask: int, support: Sequence[int]) -> int:
    """Re-index ``mask`` onto positions of ``support`` (sorted bit indices)."""
    out = 0
    for new, old in enumerate(support):
        if mask >> old & 1:
            out |= 1 << new
    return out


# -- the complex -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    m: int
    facets: tuple
    labels: tuple = field(default=())
    allow_ghosts: bool = False

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(1, self.m + 1)))

    # identity ignores labels: two complexes are equal when they have the same
    # vertex count and the same facets.
    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.m == other.m and self.facets == other.facets

    def __hash__(self):
        return hash((self.m, self.facets))

    def __repr__(self):
        body = " ".join(fmt(f) for f in self.facets) if self.facets else "void"
        return f"SimplicialComplex(m={self.m}, facets=[{body}])"

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    @property
    def is_void(self) -> bool:
        return not self.facets

    @cached_property
    def vertex_mask(self) -> int:
        out = 0
        for f in self.facets:
            out |= f
        return out

    @cached_property
    def ghost_vertices(self) -> tuple[int, ...]:
        return verts(self.full_mask & ~self.vertex_mask)

    @cached_property
    def faces(self) -> tuple[int, ...]:
        """All faces (including ∅ unless void), sorted by size then lex."""
        out = set()
        for f in self.facets:
            out.update(submasks(f))
        return tuple(sorted(out, key=lambda s: (popcount(s), lex_key(s))))

    @cached_property
    def face_set(self) -> frozenset:
        return frozenset(self.faces)

    def faces_of_size(self, k: int) -> list[int]:
        return [f for f in self.faces if popcount(f) == k]

    def contains(self, mask: int) -> bool:
        return mask in self.face_set

    __contains__ = contains

    @property
    def dim(self) -> int:
        if not self.facets:
            return -2
        return max(popcount(f) for f in self.facets) - 1

    @cached_property
    def f_vector(self) -> tuple[int, ...]:
        """``(f_{-1}, f_0, ..., f_dim)``."""
        counts = [0] * (self.dim + 2)
        for f in self.faces:
            counts[popcount(f)] += 1
        return tuple(counts)

    @cached_property
    def minimal_nonfaces(self) -> tuple[int, ...]:
        """Minimal non-faces, each of size at most ``dim + 2``, sorted lex."""
        if self.is_void:
            return (0,)
        fs = self.face_set
        out = set()
        full = self.full_mask
        for f in self.faces:
            rest = full & ~f
            while rest:
                low = rest & -rest
                rest ^= low
                s = f | low
                if s in fs or s in out:
                    continue
                t = s
                ok = True
                while t:
                    b = t & -t
                    t ^= b
                    if (s ^ b) not in fs:
                        ok = False
                        break
                if ok:
                    out.add(s)
        return tuple(sorted(out, key=lex_key))

    def vertex_label(self, i: int):
        return self.labels[i - 1]

    def facet_lists(self, use_labels: bool = False) -> list[list[int]]:
        if use_labels:
            return [[self.labels[v - 1] for v in verts(f)] for f in self.facets]
        return [list(verts(f)) for f in self.facets]


def _make(m: int, facet_masks: Iterable[int], labels=(), allow_ghosts: bool = True) -> SimplicialComplex:
    facets = tuple(sorted(_maximal(facet_masks), key=lex_key))
    return SimplicialComplex(m, facets, tuple(labels), allow_ghosts)


def from_facets(m: int, sets: Iterable, mode: str = "facets", *, allow_ghosts: bool = False,
                max_vertices: int = DEFAULT_MAX_VERTICES) -> SimplicialComplex:
    """Build a complex on ``[m]`` from facets or from its minimal non-faces.

    ``sets`` holds vertex collections (1-based) or bitmasks.  In ``"facets"``
    mode non-maximal sets are absorbed; in ``"nonfaces"`` mode the sets must
    form an antichain with no singletons.
    """
    if m < 0:
        raise ValidationError("m must be nonnegative")
    if m > max_vertices:
        raise ValidationError(f"m = {m} exceeds the vertex cap {max_vertices}")
    masks = [s if isinstance(s, int) else mask_of(s) for s in sets]
    full = (1 << m) - 1
    for s in masks:
        if s & ~full:
            raise ValidationError(f"set {fmt(s)} uses a vertex outside [1, {m}]")
    if mode == "facets":
        if not masks:
            if m > 0:
                raise ValidationError("empty facet list")
            masks = [0]
        K = _make(m, masks, allow_ghosts=allow_ghosts)
    elif mode == "nonfaces":
        if m < 1:
            raise ValidationError("m must be at least 1")
        for s in masks:
            if popcount(s) < 2 and not allow_ghosts:
                raise ValidationError(f"non-face {fmt(s)} has fewer than two vertices")
        for a, b in combinations(masks, 2):
            if a & ~b == 0 or b & ~a == 0:
                raise ValidationError(f"non-faces {fmt(a)} and {fmt(b)} are nested")
        K = _make(m, _faces_avoiding(m, masks), allow_ghosts=allow_ghosts)
    else:
        raise ValidationError(f"unknown mode {mode!r}")
    if not allow_ghosts and K.ghost_vertices:
        raise ValidationError(f"ghost vertices {list(K.ghost_vertices)} (every vertex must lie in a facet)")
    return K


def _faces_avoiding(m: int, nonfaces: list[int]) -> list[int]:
    """Maximal subsets of ``[m]`` containing none of ``nonfaces``."""
    level = {0}
    maximal = []
    while level:
        nxt = set()
        for f in level:
            grew = False
            for i in range(m):
                b = 1 << i
                if f & b:
                    continue
                s = f | b
                if any(n & ~s == 0 for n in nonfaces):
                    continue
                grew = True
                if b > f:  # extend in increasing order to avoid duplicates
                    nxt.add(s)
            if not grew:
                maximal.append(f)
        level = nxt
    return maximal


def minimal_nonfaces(K: SimplicialComplex) -> list[int]:
    return list(K.minimal_nonfaces)


def simplex(n: int) -> SimplicialComplex:
    """The full simplex Δ^n on n + 1 vertices."""
    return from_facets(n + 1, [(1 << (n + 1)) - 1])


def empty_complex() -> SimplicialComplex:
    return SimplicialComplex(0, (0,))


def is_simplex(K: SimplicialComplex) -> bool:
    return K.facets == (K.full_mask,)


def is_simplex_boundary(K: SimplicialComplex) -> bool:
    return K.m >= 1 and K.minimal_nonfaces == (K.full_mask,)


def _restrict(K: SimplicialComplex, U: int, keep_ghosts: bool) -> SimplicialComplex:
    support = [i for i in range(K.m) if U >> i & 1]
    masks = [_compress(f & U, support) for f in K.facets]
    labels = tuple(K.labels[i] for i in support)
    return _make(len(support), masks, labels, allow_ghosts=keep_ghosts or K.allow_ghosts)


def full_subcomplex(K: SimplicialComplex, U) -> SimplicialComplex:
    """``K_U``, re-indexed onto ``1..|U|``; ``labels`` keeps the original names."""
    U = U if isinstance(U, int) else mask_of(U)
    if U & ~K.full_mask:
        raise ValidationError("U is not a subset of the vertex set")
    if K.is_void:
        return K
    return _restrict(K, U, keep_ghosts=False)


def deletion(K: SimplicialComplex, i: int) -> SimplicialComplex:
    return full_subcomplex(K, K.full_mask & ~(1 << (i - 1)))


def link(K: SimplicialComplex, sigma) -> SimplicialComplex:
    """``lk σ = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}``, on its own vertices (ghosts pruned)."""
    s = sigma if isinstance(sigma, int) else mask_of(sigma)
    if s not in K:
        raise ValidationError(f"{fmt(s)} is not a face")
    masks = [f & ~s for f in K.facets if f & s == s]
    vm = 0
    for f in masks:
        vm |= f
    support = [i for i in range(K.m) if vm >> i & 1]
    return _make(len(support), [_compress(f, support) for f in masks],
                 tuple(K.labels[i] for i in support), allow_ghosts=False)


def link_faces(K: SimplicialComplex, s: int) -> list[int]:
    """Faces of ``lk s`` in the original indexing (no relabel); used in hot loops."""
    return [f & ~s for f in K.faces if f & s == s]


def alexander_dual(K: SimplicialComplex) -> SimplicialComplex:
    """``K^∨ = {[m] ∖ F : F ∉ K}``; ghost vertices are kept."""
    if is_simplex(K) or K.is_void:
        raise ValidationError("the Alexander dual of a full simplex is the void complex")
    full = K.full_mask
    return _make(K.m, [full & ~n for n in K.minimal_nonfaces], K.labels, allow_ghosts=True)


def generated_by_faces_of_size(K: SimplicialComplex, q: int) -> SimplicialComplex:
    """Pure subcomplex generated by the faces of cardinality exactly ``q``."""
    fs = K.faces_of_size(q) if q > 0 else [0]
    if not fs:
        fs = [0]
    return _make(K.m, fs, K.labels, allow_ghosts=True)


@dataclass(frozen=True)
class CombinatorialPredicates:
    dimension: int
    f_vector: tuple
    is_flag: bool
    is_neighbourly: bool
    is_cone: bool
    is_pure: bool


def is_neighbourly(K: SimplicialComplex) -> bool:
    # a full simplex has no missing faces at all; it is reported as not neighbourly
    mf = K.minimal_nonfaces
    k = (K.dim + 1) // 2
    return bool(mf) and all(popcount(n) > k for n in mf)


def is_cone(K: SimplicialComplex) -> bool:
    common = K.full_mask
    for f in K.facets:
        common &= f
    return bool(common) and not K.is_void


def is_flag(K: SimplicialComplex) -> bool:
    return all(popcount(n) == 2 for n in K.minimal_nonfaces)


def combinatorial_predicates(K: SimplicialComplex) -> CombinatorialPredicates:
    sizes = {popcount(f) for f in K.facets}
    return CombinatorialPredicates(
        dimension=K.dim,
        f_vector=K.f_vector,
        is_flag=is_flag(K),
        is_neighbourly=is_neighbourly(K),
        is_cone=is_cone(K),
        is_pure=len(sizes) <= 1,
    )


def one_skeleton(K: SimplicialComplex) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(verts(K.vertex_mask))
    G.add_edges_from(verts(f) for f in K.faces_of_size(2))
    return G


def chordless_cycle_threshold(K: SimplicialComplex) -> int | None:
    """Shortest induced cycle of length >= 4 in the 1-skeleton; None if chordal."""
    G = one_skeleton(K)
    if nx.is_chordal(G):
        return None
    for bound in range(4, G.number_of_nodes() + 1):
        for cyc in nx.chordless_cycles(G, length_bound=bound):
            if len(cyc) >= 4:
                return len(cyc)
    return None  # pragma: no cover - a non-chordal graph has a chordless cycle


# -- constructions -----------------------------------------------------------

@dataclass(frozen=True)
class ConnectedSum:
    complex: SimplicialComplex
    vertex_map_K: dict
    vertex_map_L: dict


def connected_sum_with_maps(K: SimplicialComplex, sigma_K, L: SimplicialComplex, sigma_L,
                            glue: dict | None = None) -> ConnectedSum:
    """``K #_σ L``: delete the facet from both, identify its vertices via ``glue``.

    ``glue`` maps vertices of ``sigma_L`` to vertices of ``sigma_K``; by default
    the two facets are matched in increasing order.  L's remaining vertices are
    appended after K's in ascending order.
    """
    sK = sigma_K if isinstance(sigma_K, int) else mask_of(sigma_K)
    sL = sigma_L if isinstance(sigma_L, int) else mask_of(sigma_L)
    if sK not in K.facets:
        raise ValidationError(f"{fmt(sK)} is not a facet of the first complex")
    if sL not in L.facets:
        raise ValidationError(f"{fmt(sL)} is not a facet of the second complex")
    if not (popcount(sK) - 1 == popcount(sL) - 1 == K.dim == L.dim):
        raise ValidationError("connected sum needs facets of the common top dimension")
    if glue is None:
        glue = dict(zip(verts(sL), verts(sK)))
    if sorted(glue) != list(verts(sL)) or sorted(glue.values()) != list(verts(sK)):
        raise ValidationError("glue must be a bijection from the second facet onto the first")
    lmap = dict(glue)
    nxt = K.m + 1
    for v in range(1, L.m + 1):
        if v not in lmap:
            lmap[v] = nxt
            nxt += 1
    m = nxt - 1
    facets = [f for f in K.facets if f != sK]
    for f in L.facets:
        if f != sL:
            facets.append(mask_of(lmap[v] for v in verts(f)))
    labels = tuple(range(1, m + 1))
    return ConnectedSum(_make(m, facets, labels, allow_ghosts=False),
                        {v: v for v in range(1, K.m + 1)}, lmap)


def connected_sum(K, sigma_K, L, sigma_L, glue=None) -> SimplicialComplex:
    return connected_sum_with_maps(K, sigma_K, L, sigma_L, glue).complex


def simplex_boundary(n: int) -> SimplicialComplex:
    """∂Δ^n on n + 1 vertices."""
    if n < 1:
        raise ValidationError("simplex_boundary needs n >= 1")
    full = (1 << (n + 1)) - 1
    return from_facets(n + 1, [full & ~(1 << i) for i in range(n + 1)])


def stellar_subdivide_facet(K: SimplicialComplex, sigma) -> SimplicialComplex:
    """Cone a new vertex ``m + 1`` over the boundary of the facet ``sigma``."""
    s = sigma if isinstance(sigma, int) else mask_of(sigma)
    if s not in K.facets:
        raise ValidationError(f"{fmt(s)} is not a facet")
    k = popcount(s)
    if k - 1 != K.dim:
        # stellar subdivision of a lower-dimensional facet is still well defined
        new = 1 << K.m
        facets = [f for f in K.facets if f != s]
        facets += [(s & ~(1 << i)) | new for i in range(K.m) if s >> i & 1]
        return _make(K.m + 1, facets, allow_ghosts=False)
    bd = simplex_boundary(k)
    return connected_sum(K, s, bd, (1 << k) - 1)


def cycle(m: int) -> SimplicialComplex:
    if m < 3:
        raise ValidationError("cycle needs m >= 3")
    return from_facets(m, [(i, i % m + 1) for i in range(1, m + 1)])


def gale_facets(n: int, m: int) -> list[int]:
    """Facets of the boundary of the cyclic polytope C_n(m) by Gale evenness."""
    out = []
    for S in combinations(range(1, m + 1), n):
        Sset = set(S)
        outside = [v for v in range(1, m + 1) if v not in Sset]
        if all(sum(1 for s in S if a < s < b) % 2 == 0 for a, b in zip(outside, outside[1:])):
            out.append(mask_of(S))
    return out


def cyclic(n: int, m: int) -> SimplicialComplex:
    if n < 2 or m <= n:
        raise ValidationError("cyclic(n, m) needs n >= 2 and m > n")
    return from_facets(m, gale_facets(n, m))


def join(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    facets = [f | (g << K.m) for f in K.facets for g in L.facets]
    return _make(K.m + L.m, facets, allow_ghosts=K.allow_ghosts or L.allow_ghosts)


def join_of_boundaries(n1: int, n2: int) -> SimplicialComplex:
    return join(simplex_boundary(n1), simplex_boundary(n2))


def stacked(n: int, count: int = 0, seed: int | None = None, facet_sequence: Sequence | None = None) -> SimplicialComplex:
    """Start from ∂Δ^n and stellar-subdivide facets.

    Either ``facet_sequence`` names the facets to subdivide in order, or
    ``count`` facets are drawn with a PRNG seeded by ``seed``.
    """
    K = simplex_boundary(n)
    if facet_sequence is not None:
        for f in facet_sequence:
            K = stellar_subdivide_facet(K, f)
        return K
    if count < 0:
        raise ValidationError("count must be nonnegative")
    rng = random.Random(0 if seed is None else seed)
    for _ in range(count):
        K = stellar_subdivide_facet(K, rng.choice(K.facets))
    return K


FAMILIES = {
    "cycle": cycle,
    "simplex_boundary": simplex_boundary,
    "boundary": simplex_boundary,
    "simplex": simplex,
    "cyclic": cyclic,
    "stacked": stacked,
    "join_of_boundaries": join_of_boundaries,
    "join": join_of_boundaries,
}


def generate_family(spec: str, seed: int | None = None) -> SimplicialComplex:
    """Build a named family member from ``"name:arg1,arg2"``.

    ``cycle:m``, ``boundary:n``, ``simplex:n``, ``cyclic:n,m``,
    ``stacked:n,count``, ``join:n1,n2``.
    """
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if name not in FAMILIES:
        raise ValidationError(f"unknown family {name!r}; choose from {sorted(FAMILIES)}")
    try:
        args = [int(a) for a in rest.split(",") if a.strip()]
    except ValueError:
        raise ValidationError(f"bad family arguments in {spec!r}") from None
    try:
        if name == "stacked":
            return stacked(*args, seed=seed)
        return FAMILIES[name](*args)
    except TypeError:
        raise ValidationError(f"wrong number of arguments for family {name!r}") from None


def random_complex(m: int, rng: random.Random, max_facets: int | None = None, max_size: int | None = None,
                   allow_ghosts: bool = False) -> SimplicialComplex:
    """A random complex on ``[m]`` (every vertex covered unless ``allow_ghosts``)."""
    max_size = max_size or m
    nf = max_facets or rng.randint(1, 2 * m)
    facets = []
    for _ in range(nf):
        k = rng.randint(1, max_size)
        facets.append(mask_of(rng.sample(range(1, m + 1), k)))
    if not allow_ghosts:
        covered = 0
        for f in facets:
            covered |= f
        for i in range(m):
            if not covered >> i & 1:
                facets.append(1 << i)
    return _make(m, facets, allow_ghosts=allow_ghosts)
