"""Betti numbers of arbitrary monomial ideals.

Multigraded Betti numbers come from upper Koszul complexes
``K^b(I) = {τ ⊆ supp b : x^{b-τ} ∈ I}`` with ``β_{i,b}(I) = H̃_{i-1}(K^b)``.
``K^b`` is generated by the sets ``{k : g_k < b_k}`` over generators ``g | b``,
which is how it is built here.  A Taylor-complex computation serves as an
independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .complexes import SimplicialComplex, _make, _maximal, popcount, submasks
from .errors import CapExceeded, ValidationError
from .hochster import GradedBettiTable, betti_table
from .homology import _rank_f2, homology_ranks, integral_reduced_homology
from .linalg import QQ, CoefficientSpec, EchelonPool

DEFAULT_MAX_GENERATORS = 25
DEFAULT_TAYLOR_MAX_GENERATORS = 16


def _divides(g, b) -> bool:
    return all(x <= y for x, y in zip(g, b))


def _lcm(a, b):
    return tuple(x if x >= y else y for x, y in zip(a, b))


@dataclass(frozen=True)
class MonomialIdeal:
    """Ideal in ``k[x_1..x_m]`` given by minimal generators (exponent tuples)."""

    m: int
    generators: tuple

    @classmethod
    def from_generators(cls, m: int, gens) -> "MonomialIdeal":
        vecs = []
        for g in gens:
            g = tuple(int(x) for x in g)
            if len(g) != m or any(x < 0 for x in g):
                raise ValidationError(f"bad exponent vector {g} for {m} variables")
            vecs.append(g)
        return cls(m, minimize(vecs))

    @classmethod
    def from_supports(cls, m: int, supports) -> "MonomialIdeal":
        """Squarefree ideal from vertex sets (1-based) or bitmasks."""
        vecs = []
        for s in supports:
            mask = s if isinstance(s, int) else sum(1 << (v - 1) for v in s)
            vecs.append(tuple((mask >> k) & 1 for k in range(m)))
        return cls.from_generators(m, vecs)

    def __len__(self):
        return len(self.generators)

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def degrees(self) -> list[int]:
        return sorted({sum(g) for g in self.generators})

    @property
    def is_equigenerated(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def is_squarefree(self) -> bool:
        return all(x <= 1 for g in self.generators for x in g)

    def contains(self, b) -> bool:
        return any(_divides(g, b) for g in self.generators)

    def __contains__(self, b):
        return self.contains(b)

    def monomial_strings(self) -> list[str]:
        return [monomial_string(g) for g in self.generators]


def minimize(vecs) -> tuple:
    """Drop duplicates and non-minimal generators; deterministic order (degree, then reverse lex)."""
    uniq = sorted(set(vecs), key=lambda g: (sum(g), tuple(-x for x in g)))
    out = []
    for g in uniq:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return tuple(out)


def monomial_string(g) -> str:
    """``x_1^2 x_3`` style rendering with 1-based variables, written ``v1^2*v3``."""
    parts = []
    for k, e in enumerate(g):
        if e == 1:
            parts.append(f"v{k + 1}")
        elif e > 1:
            parts.append(f"v{k + 1}^{e}")
    return "*".join(parts) or "1"


def stanley_reisner_ideal(K: SimplicialComplex) -> MonomialIdeal:
    return MonomialIdeal.from_supports(K.m, K.minimal_nonfaces)


def component_ideal(I: MonomialIdeal, d: int) -> MonomialIdeal:
    """``I_{⟨d⟩}``: generated by all degree-``d`` monomials of ``I``."""
    m = I.m
    out = set()
    for g in I.generators:
        e = d - sum(g)
        if e < 0:
            continue
        for extra in combinations_with_replacement(range(m), e):
            v = list(g)
            for k in extra:
                v[k] += 1
            out.add(tuple(v))
    return MonomialIdeal(m, minimize(out))


def _slack_facets(I: MonomialIdeal, b) -> list[int]:
    facets = []
    for g in I.generators:
        if _divides(g, b):
            mask = 0
            for k, (x, y) in enumerate(zip(g, b)):
                if x < y:
                    mask |= 1 << k
            facets.append(mask)
    return _maximal(facets)


def upper_koszul_complex(I: MonomialIdeal, b) -> SimplicialComplex:
    """``K^b(I)`` on the variables of ``I`` (variables outside ``supp b`` are ghosts)."""
    b = tuple(b)
    if len(b) != I.m or any(x < 0 for x in b):
        raise ValidationError(f"bad multidegree {b}")
    return _make(I.m, _slack_facets(I, b), allow_ghosts=True)


def _faces_from_facets(facets: list[int]) -> list[int]:
    out = set()
    for f in facets:
        if f in out:
            continue
        out.update(submasks(f))
    return list(out)


class _KoszulHomologyCache:
    def __init__(self, spec: CoefficientSpec):
        self.spec = spec
        self.ranks: dict = {}

    def get(self, facets: list[int]) -> dict[int, int]:
        if not facets:
            return {}
        common = facets[0]
        for f in facets[1:]:
            common &= f
        if common:
            return {}  # a cone is acyclic
        key = tuple(sorted(facets))
        r = self.ranks.get(key)
        if r is None:
            r = homology_ranks(_faces_from_facets(facets), self.spec)
            self.ranks[key] = r
        return r


def lcm_lattice(I: MonomialIdeal, max_size: int | None = None) -> set:
    """Joins of nonempty generator subsets of size at most ``max_size``."""
    gens = I.generators
    level = set(gens)
    seen = set(gens)
    size = 1
    while level and (max_size is None or size < max_size):
        nxt = set()
        for a in level:
            for g in gens:
                c = _lcm(a, g)
                if c not in seen:
                    nxt.add(c)
        seen |= nxt
        level = nxt
        size += 1
    return seen


def monomial_betti_table(I: MonomialIdeal, coeff: CoefficientSpec = QQ, max_i: int | None = None,
                         max_generators: int | None = None) -> GradedBettiTable:
    """``β_{i,b}(I)`` for ``i <= max_i`` (ideal indexing, generators at ``i = 0``).

    Only ``b`` in the lcm lattice can carry Betti numbers; ``β_{i,b} != 0``
    needs ``b`` to be a join of at most ``i + 1`` generators (Taylor bound),
    so the lattice is truncated accordingly.
    """
    cap = DEFAULT_MAX_GENERATORS if max_generators is None else max_generators
    if len(I) > cap:
        raise CapExceeded("monomial generators", len(I), cap)
    if not coeff.is_field:
        raise ValidationError("monomial Betti numbers are computed over a field")
    if max_i is None:
        max_i = I.m
    entries = {}
    if I.is_zero or max_i < 0:
        return GradedBettiTable("ideal", coeff, {}, {})
    cache = _KoszulHomologyCache(coeff)
    for b in lcm_lattice(I, max_i + 1):
        for q, r in cache.get(_slack_facets(I, b)).items():
            if q + 1 <= max_i:
                entries[(q + 1, b)] = r
    return GradedBettiTable.from_multigraded("ideal", coeff, entries, sum)


def koszul_torsion_primes(I: MonomialIdeal, max_i: int | None = None) -> set[int]:
    """Primes dividing torsion of some ``H̃_*(K^b(I); Z)``, ``b`` in the lcm lattice."""
    out: set[int] = set()
    seen = set()
    for b in lcm_lattice(I, None if max_i is None else max_i + 1):
        facets = _slack_facets(I, b)
        if not facets or max(map(popcount, facets)) <= 2:
            continue
        key = tuple(sorted(facets))
        if key in seen:
            continue
        seen.add(key)
        out |= integral_reduced_homology(_faces_from_facets(facets)).torsion_primes()
    return out


def taylor_betti_oracle(I: MonomialIdeal, coeff: CoefficientSpec = QQ,
                        max_generators: int | None = None) -> GradedBettiTable:
    """Betti numbers of ``S/I`` from the Taylor complex tensored with ``k``.

    Basis: subsets ``F`` of generators in multidegree ``lcm(F)``; after
    reducing mod the maximal ideal only faces ``F ∖ g`` with the same lcm
    survive in the differential.
    """
    cap = DEFAULT_TAYLOR_MAX_GENERATORS if max_generators is None else max_generators
    n = len(I)
    if n > cap:
        raise CapExceeded("Taylor generators", n, cap)
    if not coeff.is_field:
        raise ValidationError("the Taylor oracle works over a field")
    gens = I.generators
    zero = tuple(0 for _ in range(I.m))
    lcms = [zero] * (1 << n)
    groups: dict = {}
    for F in range(1 << n):
        if F:
            low = F & -F
            lcms[F] = _lcm(lcms[F ^ low], gens[low.bit_length() - 1])
        groups.setdefault(lcms[F], []).append(F)
    entries = {}
    for b, members in groups.items():
        by_size: dict[int, list[int]] = {}
        for F in members:
            by_size.setdefault(popcount(F), []).append(F)
        index = {s: {F: k for k, F in enumerate(fs)} for s, fs in by_size.items()}
        rank_d = {}
        for s, fs in by_size.items():
            if s == 0 or (s - 1) not in index:
                continue
            cols = []
            for F in fs:
                col = {}
                sign = 1
                t = F
                while t:
                    low = t & -t
                    t ^= low
                    k = index[s - 1].get(F ^ low)
                    if k is not None:
                        col[k] = sign
                    sign = -sign
                cols.append(col)
            rank_d[s] = _rank(cols, coeff)
        for s, fs in by_size.items():
            r = len(fs) - rank_d.get(s, 0) - rank_d.get(s + 1, 0)
            if r:
                entries[(s, b)] = r
    return GradedBettiTable.from_multigraded("quotient", coeff, entries, sum)


def _rank(cols: list[dict], spec: CoefficientSpec) -> int:
    if spec.kind == "F" and spec.p == 2:
        return _rank_f2([sum(1 << r for r in c) for c in cols])
    if spec.kind == "F":
        cols = [{r: x % spec.p for r, x in c.items()} for c in cols]
    pool = EchelonPool(spec)
    return sum(1 for c in cols if pool.add(c) is not None)


@dataclass
class ComponentwiseProfile:
    """Linearity of the component ideals ``(I_K)_{⟨d⟩}`` in the first ``r`` steps."""

    r: float
    projdim_ideal: int
    per_degree: dict = field(default_factory=dict)  # d -> bool (first r steps)
    per_degree_cal: dict = field(default_factory=dict)  # d -> bool (first projdim steps)
    first_nonlinear: dict = field(default_factory=dict)  # d -> (i, j) or None
    is_componentwise_linear_first_r: bool = False
    is_CAL: bool = False
    skipped: tuple = ()  # degrees left unchecked once both verdicts were already False


def componentwise_profile(K: SimplicialComplex, coeff: CoefficientSpec = QQ, r: float = math.inf,
                          strict: bool = False, max_generators: int | None = None,
                          max_m: int | None = None, short_circuit: bool = True) -> ComponentwiseProfile:
    """Check ``N_{d,r}`` for every component ``(I_K)_{⟨d⟩}``; ``is_CAL`` uses ``r = projdim I_K``.

    ``d`` runs over generator degrees, or over the whole range from the
    least to the largest generator degree with ``strict=True``.  Over Z the
    answer is the conjunction over Q and the relevant primes.  Degrees are
    visited in increasing order; with ``short_circuit`` the scan stops as soon
    as both verdicts are False.
    """
    from .strand import z_fields

    I = stanley_reisner_ideal(K)
    if I.is_zero:
        return ComponentwiseProfile(r, -1)
    if coeff.kind == "Z":
        fields = z_fields(K, coeff)
        primes = set()
        for d in _degrees(I, strict):
            primes |= koszul_torsion_primes(component_ideal(I, d))
        fields += [f for f in (CoefficientSpec("F", p) for p in sorted(primes)) if f not in fields]
        profiles = [componentwise_profile(K, f, r, strict, max_generators, max_m, False) for f in fields]
        out = profiles[0]
        for p in profiles[1:]:
            for d, ok in p.per_degree.items():
                out.per_degree[d] = out.per_degree[d] and ok
            for d, ok in p.per_degree_cal.items():
                out.per_degree_cal[d] = out.per_degree_cal[d] and ok
            out.projdim_ideal = max(out.projdim_ideal, p.projdim_ideal)
            out.is_componentwise_linear_first_r &= p.is_componentwise_linear_first_r
            out.is_CAL &= p.is_CAL
        return out
    pd = betti_table(K, coeff, "ideal", max_m=max_m).projdim
    steps = max(r, pd)
    prof = ComponentwiseProfile(r, pd)
    degrees = _degrees(I, strict)
    for n, d in enumerate(degrees):
        cl_settled = r <= 0 or not all(prof.per_degree.values())  # r = 0 is vacuously linear
        if short_circuit and n and cl_settled and not all(prof.per_degree_cal.values()):
            prof.skipped = tuple(degrees[n:])
            break
        J = component_ideal(I, d)
        t = monomial_betti_table(J, coeff, None if steps == math.inf else int(steps) - 1, max_generators)
        bad = t.first_nonlinear_step(d)
        prof.first_nonlinear[d] = None if bad is None else min(
            (i, j) for (i, j), v in t.coarse.items() if v and i == bad and j != i + d)
        prof.per_degree[d] = bad is None or bad >= r
        prof.per_degree_cal[d] = bad is None or bad >= pd
    prof.is_componentwise_linear_first_r = all(prof.per_degree.values())
    prof.is_CAL = all(prof.per_degree_cal.values())
    return prof


def _degrees(I: MonomialIdeal, strict: bool) -> list[int]:
    degs = I.degrees()
    if strict and degs:
        return list(range(degs[0], degs[-1] + 1))
    return degs
