"""Fixtures, random generators and brute-force oracles shared by the tests.

The oracles deliberately avoid the library's sparse kernels: ranks use dense
Gaussian elimination, invariant factors use determinantal divisors, and the
strand oracle spans boundaries of missing faces directly.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from math import gcd

from zkstrand.complexes import (_make, connected_sum, cycle, cyclic, from_facets, join, join_of_boundaries, mask_of,
                                popcount, simplex_boundary, stacked, verts)

BG_NONFACES = [125, 135, 136, 138, 145, 146, 246, 247, 256, 257, 278, 348, 357, 378, 468, 678]
RP2_FACETS = [[1, 2, 3], [1, 3, 4], [1, 4, 5], [1, 5, 6], [1, 2, 6], [2, 3, 5], [2, 4, 5], [2, 4, 6], [3, 4, 6],
              [3, 5, 6]]


def digits(n: int) -> list[int]:
    return [int(c) for c in str(n)]


def bg_sphere():
    return from_facets(8, [digits(x) for x in BG_NONFACES], mode="nonfaces")


def example_k():
    """Stellar subdivision of ∂Δ²∗∂Δ² at 1245: I_K = (1245, 123, 456, 37, 67)."""
    return from_facets(7, [[1, 2, 4, 5], [1, 2, 3], [4, 5, 6], [3, 7], [6, 7]], mode="nonfaces")


def stacked_fixture():
    return from_facets(6, [[1, 2, 3], [1, 2, 4], [3, 6], [4, 5], [5, 6]], mode="nonfaces")


def rp2():
    return from_facets(6, RP2_FACETS)


# -- random instances ------------------------------------------------------------

def random_complex(rng: random.Random, m_max: int = 7, max_mf: int | None = None):
    """Random complex on [m] (no ghosts, not a simplex), optionally few missing faces."""
    while True:
        m = rng.randint(3, m_max)
        nf = rng.randint(1, 2 * m)
        facets = [mask_of(rng.sample(range(1, m + 1), rng.randint(1, min(m - 1, 4)))) for _ in range(nf)]
        cov = 0
        for f in facets:
            cov |= f
        facets += [1 << i for i in range(m) if not cov >> i & 1]
        K = _make(m, facets, allow_ghosts=False)
        if not K.minimal_nonfaces:
            continue
        if max_mf is not None and len(K.minimal_nonfaces) > max_mf:
            continue
        return K


def random_flag_complex(rng: random.Random, m_max: int = 7):
    """Clique complex of a random graph with no isolated vertex issues."""
    m = rng.randint(3, m_max)
    p = rng.uniform(0.3, 0.85)
    edges = {(a, b) for a, b in combinations(range(1, m + 1), 2) if rng.random() < p}
    nonfaces = [[a, b] for a, b in combinations(range(1, m + 1), 2) if (a, b) not in edges]
    if not nonfaces:
        nonfaces = [[1, 2]]
    return from_facets(m, nonfaces, mode="nonfaces")


def permute(K, rng: random.Random):
    perm = list(range(1, K.m + 1))
    rng.shuffle(perm)
    return _make(K.m, [mask_of(perm[v - 1] for v in verts(f)) for f in K.facets], allow_ghosts=False)


def sphere_pool():
    """Deterministic sphere triangulations with m <= 7."""
    out = [cycle(m) for m in range(4, 8)]
    out += [join_of_boundaries(1, 1), join_of_boundaries(1, 2), join_of_boundaries(2, 2), join_of_boundaries(1, 3),
            join_of_boundaries(2, 3), join(join_of_boundaries(1, 1), simplex_boundary(1)), cyclic(4, 6), cyclic(4, 7),
            example_k(), stacked_fixture()]
    out += [simplex_boundary(n) for n in (2, 3, 4, 5)]
    for n in (2, 3, 4):
        for count in range(1, 7 - n):
            for seed in range(3):
                out.append(stacked(n, count, seed=seed))
    # a neighbourly-free 2-sphere and a connected sum of 1-spheres
    out.append(connected_sum(cycle(4), [1, 2], cycle(4), [1, 2]))
    out.append(connected_sum(join_of_boundaries(1, 2), [1, 3, 4], simplex_boundary(3), [1, 2, 3]))
    return [K for K in out if K.m <= 7]


def bistellar_flip(K, rng: random.Random):
    """One random bistellar move ``σ * ∂τ -> ∂σ * τ`` with ``2 <= |σ| <= dim``; None if none applies."""
    d = K.dim
    faces = set(K.faces)
    cands = [s for s in faces if 2 <= popcount(s) <= d]
    rng.shuffle(cands)
    for s in cands:
        lk = [f & ~s for f in K.facets if f & s == s]
        tau = 0
        for f in lk:
            tau |= f
        k = d + 2 - popcount(s)
        if popcount(tau) != k or len(lk) != k or tau in faces:
            continue
        if any(popcount(f) != k - 1 for f in lk):
            continue
        new = [f for f in K.facets if not (f & s == s)]
        new += [(s & ~(1 << (v - 1))) | tau for v in verts(s)]
        return _make(K.m, new, allow_ghosts=False)
    return None


def random_spheres(rng: random.Random, count: int, flips: int = 0):
    """Relabelled pool spheres, optionally scrambled by up to ``flips`` bistellar moves."""
    pool = sphere_pool()
    out = []
    for _ in range(count):
        K = rng.choice(pool)
        for _ in range(rng.randint(0, flips)):
            K = bistellar_flip(K, rng) or K
        out.append(permute(K, rng))
    return out


# -- dense oracles ----------------------------------------------------------------

def dense_rank(rows, p: int = 0) -> int:
    """Rank by textbook Gaussian elimination over Q (p = 0) or F_p."""
    A = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    if not A:
        return 0
    n, mcols = len(A), len(A[0])
    r = 0
    for c in range(mcols):
        piv = next((i for i in range(r, n) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if p == 0 else pow(A[r][c], -1, p)
        for i in range(n):
            if i != r and A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
                if p:
                    A[i] = [a % p for a in A[i]]
        r += 1
        if r == n:
            break
    return r


def boundary_dense(faces, n: int):
    """Dense ∂_n over the faces (including the empty face at n = 0)."""
    src = sorted((f for f in faces if popcount(f) == n + 1), key=verts)
    tgt = sorted((f for f in faces if popcount(f) == n), key=verts)
    idx = {f: i for i, f in enumerate(tgt)}
    M = [[0] * len(src) for _ in tgt]
    for j, f in enumerate(src):
        for k, v in enumerate(verts(f)):
            M[idx[f & ~(1 << (v - 1))]][j] = (-1) ** k
    return M, src, tgt


def oracle_homology_ranks(faces, p: int = 0) -> dict:
    faces = list(faces)
    if not faces:
        return {}
    top = max(map(popcount, faces)) - 1
    ranks = {}
    for n in range(0, top + 1):
        M, _, _ = boundary_dense(faces, n)
        ranks[n] = dense_rank(M, p) if M and M[0] else 0
    out = {}
    for n in range(-1, top + 1):
        dim = sum(1 for f in faces if popcount(f) == n + 1)
        h = dim - ranks.get(n, 0) - ranks.get(n + 1, 0)
        if h:
            out[n] = h
    return out


def oracle_betti(K, p: int = 0) -> dict:
    """``{(i, U): β}`` for k[K] from dense homology of every full subcomplex."""
    out = {}
    for U in range(1 << K.m):
        fs = [f for f in K.faces if f & ~U == 0]
        for q, r in oracle_homology_ranks(fs, p).items():
            out[(popcount(U) - q - 1, U)] = r
    return out


def oracle_strand_dims(K, p: int = 0) -> dict:
    """Strand dims at ``(U, q)`` as the span of boundaries of missing faces inside ``K_U``."""
    out = {}
    mf = K.minimal_nonfaces
    for U in range(1, 1 << K.m):
        fs = [f for f in K.faces if f & ~U == 0]
        by_q = {}
        for I in mf:
            if I & ~U == 0:
                by_q.setdefault(popcount(I) - 2, []).append(I)
        for q, Is in by_q.items():
            B, src, tgt = boundary_dense(fs, q + 1)
            cyc_faces = sorted((f for f in fs if popcount(f) == q + 1), key=verts)
            idx = {f: i for i, f in enumerate(cyc_faces)}
            cols = []
            for I in Is:
                col = [0] * len(cyc_faces)
                for k, v in enumerate(verts(I)):
                    col[idx[I & ~(1 << (v - 1))]] = (-1) ** k
                cols.append(col)
            base = dense_rank(B, p) if B and B[0] else 0
            aug = [list(row) + [c[i] for c in cols] for i, row in enumerate(B)] if B and B[0] else \
                [[c[i] for c in cols] for i in range(len(cyc_faces))]
            d = dense_rank(aug, p) - base
            if d:
                out[(U, q)] = d
    return out


def _det(M) -> int:
    """Integer determinant via fraction-free Bareiss."""
    A = [list(r) for r in M]
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if sw is None:
                return 0
            A[k], A[sw] = A[sw], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def oracle_invariant_factors(rows) -> list[int]:
    """Invariant factors from determinantal divisors ``d_k = gcd(k×k minors)``."""
    if not rows or not rows[0]:
        return []
    n, m = len(rows), len(rows[0])
    divisors = [1]
    for k in range(1, min(n, m) + 1):
        g = 0
        for rs in combinations(range(n), k):
            for cs in combinations(range(m), k):
                g = gcd(g, _det([[rows[i][j] for j in cs] for i in rs]))
        if g == 0:
            break
        divisors.append(g)
    return [divisors[k] // divisors[k - 1] for k in range(1, len(divisors))]
