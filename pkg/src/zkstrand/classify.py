"""Top-level predicates and the aggregate classification report.

Predicates "over Z" are decided over Q and every prime that divides torsion
in the relevant homology (links for Reisner-type checks, full subcomplexes
for Betti/strand checks), plus the floor set {2, 3}.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .complexes import (SimplicialComplex, alexander_dual, chordless_cycle_threshold, combinatorial_predicates,
                        generated_by_faces_of_size, is_cone, is_simplex, is_simplex_boundary, link_faces, popcount,
                        verts)
from .errors import InvariantViolation
from .hochster import betti_table, poincare_sum_pairs
from .homology import homology_ranks, integral_reduced_homology, is_homology_sphere
from .linalg import GF, QQ, CoefficientSpec
from .strand import Z_FLOOR_PRIMES, deletion_criterion, is_almost_quasi_koszul, is_quasi_koszul, z_fields

SCHEMA_VERSION = 1
NOT_EQUIGENERATED = "not-equigenerated"


# -- Reisner-type predicates --------------------------------------------------

def _link_fields(faces_of_links, coeff: CoefficientSpec) -> list[CoefficientSpec]:
    if coeff.kind != "Z":
        return [coeff]
    primes = set(Z_FLOOR_PRIMES)
    for fs in faces_of_links:
        if fs and max(map(popcount, fs)) > 2:
            primes |= integral_reduced_homology(fs).torsion_primes()
    return [QQ] + [GF(p) for p in sorted(primes)]


def _links(K: SimplicialComplex):
    """``(σ, faces of lk σ, dim lk σ)`` for every face ``σ`` including ∅."""
    for s in K.faces:
        fs = link_faces(K, s)
        yield s, fs, max(map(popcount, fs)) - 1


def is_cohen_macaulay(K: SimplicialComplex, coeff: CoefficientSpec = QQ) -> bool:
    """Reisner: ``H̃_i(lk σ) = 0`` for ``i < dim lk σ`` and every face ``σ``."""
    if K.is_void:
        return False
    if len({popcount(f) for f in K.facets}) > 1:
        return False  # CM complexes are pure
    links = list(_links(K))
    for f in _link_fields([fs for _, fs, _ in links], coeff):
        for _, fs, d in links:
            if any(n < d for n in homology_ranks(fs, f)):
                return False
    return True


def is_sequentially_cm(K: SimplicialComplex, coeff: CoefficientSpec = QQ) -> bool:
    """Every pure subcomplex generated by the faces of one size is CM."""
    if K.is_void:
        return False
    return all(is_cohen_macaulay(generated_by_faces_of_size(K, q), coeff) for q in range(1, K.dim + 2))


def is_gorenstein_star(K: SimplicialComplex, coeff: CoefficientSpec = QQ) -> bool:
    """Not a cone, and every link is a homology sphere of dimension ``dim K - |σ|``."""
    if K.is_void or is_cone(K) or len({popcount(f) for f in K.facets}) > 1:
        return False
    top = K.dim
    for s in K.faces:
        if not is_homology_sphere(link_faces(K, s), coeff, dim=top - popcount(s)):
            return False
    return True


# -- resolution shape ---------------------------------------------------------

def _ideal_tables(K: SimplicialComplex, coeff: CoefficientSpec, max_m=None):
    return [betti_table(K, f, "ideal", max_m=max_m) for f in z_fields(K, coeff)]


def green_lazarsfeld_index(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None):
    """Smallest ``i`` with a nonlinear ``β_{i,j}(I_K)``; ``math.inf`` if none.

    Returns :data:`NOT_EQUIGENERATED` when ``I_K`` has generators of several
    degrees and ``None`` for the zero ideal.
    """
    mf = K.minimal_nonfaces
    if not mf:
        return None
    degs = {popcount(n) for n in mf}
    if len(degs) > 1:
        return NOT_EQUIGENERATED
    d = degs.pop()
    index = math.inf
    for t in _ideal_tables(K, coeff, max_m):
        bad = t.first_nonlinear_step(d)
        if bad is not None:
            index = min(index, bad)
    return index


def projdim_ideal(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None) -> int:
    return max(t.projdim for t in _ideal_tables(K, coeff, max_m))


def has_linear_resolution(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None) -> bool:
    return green_lazarsfeld_index(K, coeff, max_m) == math.inf


def has_almost_linear_resolution(K: SimplicialComplex, coeff: CoefficientSpec = QQ, max_m: int | None = None,
                                 gorenstein_star: bool | None = None) -> bool:
    """``index >= projdim(I_K)`` with ``I_K`` equigenerated.

    For Gorenstein* ``K`` other than a simplex boundary the answer must match
    "odd-dimensional and neighbourly"; a mismatch raises InvariantViolation.
    """
    idx = green_lazarsfeld_index(K, coeff, max_m)
    if idx is None or idx == NOT_EQUIGENERATED:
        verdict = False
    else:
        verdict = idx >= projdim_ideal(K, coeff, max_m)
    if gorenstein_star is None:
        gorenstein_star = is_gorenstein_star(K, coeff)
    if gorenstein_star and not is_simplex_boundary(K):
        cp = combinatorial_predicates(K)
        expected = cp.dimension % 2 == 1 and cp.is_neighbourly
        if expected != verdict:
            raise InvariantViolation(
                f"almost-linear verdict {verdict} disagrees with the odd-dimensional neighbourly test {expected}")
    return verdict


def is_componentwise_linear(K: SimplicialComplex, coeff: CoefficientSpec = QQ, **kw) -> bool:
    from .monomial import componentwise_profile

    if is_simplex(K):
        return False
    return componentwise_profile(K, coeff, math.inf, **kw).is_componentwise_linear_first_r


def is_componentwise_almost_linear(K: SimplicialComplex, coeff: CoefficientSpec = QQ, **kw) -> bool:
    from .monomial import componentwise_profile

    if is_simplex(K):
        return False
    return componentwise_profile(K, coeff, 0, **kw).is_CAL


# -- report -------------------------------------------------------------------

@dataclass
class CoefficientResult:
    coeff: str
    is_flag: bool
    is_neighbourly: bool
    is_cone: bool
    is_CM: bool
    is_sequentially_CM_dual: bool | None
    is_gorenstein_star: bool
    gl_index: object
    projdim_ideal: int
    regularity: int | None
    has_linear_resolution: bool
    has_almost_linear_resolution: bool
    is_componentwise_linear: bool | None
    is_CAL: bool | None
    is_quasi_koszul: bool
    is_AQK: bool
    deletion_criterion: bool | None = None

    def to_dict(self) -> dict:
        d = asdict(self)
        d["gl_index"] = _index_json(self.gl_index)
        return d


def _index_json(x):
    if x == math.inf:
        return "inf"
    return x


@dataclass
class DerivedLabel:
    name: str
    value: object
    coeff: str
    provenance: str
    hypotheses: tuple = ()

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "coeff": self.coeff,
                "provenance": self.provenance, "hypotheses": list(self.hypotheses)}


@dataclass
class ClassificationReport:
    m: int
    dim: int
    f_vector: tuple
    facets: list
    minimal_nonfaces: list
    results: dict = field(default_factory=dict)  # coefficient label -> CoefficientResult
    derived: list = field(default_factory=list)

    def labels(self, name: str | None = None) -> list[DerivedLabel]:
        return [d for d in self.derived if name is None or d.name == name]

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "m": self.m,
            "dim": self.dim,
            "f_vector": list(self.f_vector),
            "facets": self.facets,
            "minimal_nonfaces": self.minimal_nonfaces,
            "results": {k: v.to_dict() for k, v in self.results.items()},
            "derived": [d.to_dict() for d in self.derived],
        }


def check_implications(r: CoefficientResult) -> list[str]:
    """Violations of the linearity implication lattice (empty when consistent)."""
    out = []

    def imp(a, b, name):
        if a is True and b is False:
            out.append(name)

    imp(r.has_linear_resolution, r.is_componentwise_linear, "linear => componentwise linear")
    imp(r.is_componentwise_linear, r.is_quasi_koszul, "componentwise linear => quasi-Koszul")
    imp(r.has_linear_resolution, r.has_almost_linear_resolution, "linear => almost linear")
    imp(r.has_almost_linear_resolution, r.is_CAL, "almost linear => CAL")
    imp(r.is_CAL, r.is_AQK, "CAL => AQK")
    imp(r.is_quasi_koszul, r.is_AQK, "quasi-Koszul => AQK")
    imp(r.has_linear_resolution, r.is_quasi_koszul, "linear => quasi-Koszul")
    return out


def classify_one(K: SimplicialComplex, coeff: CoefficientSpec, componentwise: bool = True,
                 max_m: int | None = None, max_generators: int | None = None) -> CoefficientResult:
    from .monomial import componentwise_profile

    cp = combinatorial_predicates(K)
    zero_ideal = is_simplex(K)
    gs = is_gorenstein_star(K, coeff)
    if zero_ideal:
        return CoefficientResult(coeff.label, cp.is_flag, cp.is_neighbourly, cp.is_cone, is_cohen_macaulay(K, coeff),
                                 None, gs, None, -1, None, False, False, False, False, False, False, None)
    tables = _ideal_tables(K, coeff, max_m)
    pd = max(t.projdim for t in tables)
    reg = max(t.regularity for t in tables) - 1  # of k[K]
    idx = green_lazarsfeld_index(K, coeff, max_m)
    linear = idx == math.inf
    almost = has_almost_linear_resolution(K, coeff, max_m, gorenstein_star=gs)
    cl = cal = None
    if componentwise:
        prof = componentwise_profile(K, coeff, math.inf, max_generators=max_generators, max_m=max_m)
        cl, cal = prof.is_componentwise_linear_first_r, prof.is_CAL
    seq_dual = is_sequentially_cm(alexander_dual(K), coeff)
    qk = is_quasi_koszul(K, coeff, max_m)
    aqk = is_almost_quasi_koszul(K, coeff, max_m)
    dc = None
    if gs:
        dc = deletion_criterion(K, coeff, max_m)
        shortcut = is_almost_quasi_koszul(K, coeff, max_m, gorenstein_star=True)
        if not (aqk == dc == shortcut):
            raise InvariantViolation(
                f"AQK {aqk}, deletion criterion {dc} and proper-subset strand test {shortcut} disagree")
    res = CoefficientResult(coeff.label, cp.is_flag, cp.is_neighbourly, cp.is_cone, is_cohen_macaulay(K, coeff),
                            seq_dual, gs, idx, pd, reg, linear, almost, cl, cal, qk, aqk, dc)
    bad = check_implications(res)
    if bad:
        raise InvariantViolation("implication lattice violated: " + "; ".join(bad))
    return res


def derived_labels(K: SimplicialComplex, coeff: CoefficientSpec, r: CoefficientResult) -> list[DerivedLabel]:
    """Topological consequences for ``Z_K``; each is an implication, not a verification."""
    out = []
    c = r.coeff
    if is_simplex_boundary(K):
        out.append(DerivedLabel("sphere", f"S^{2 * K.m - 1}", c, "simplex_boundary_sphere",
                                ("K is the boundary of a simplex",)))
        return out
    if r.is_quasi_koszul:
        out.append(DerivedLabel("wedge_of_spheres", True, c, "quasi_koszul_wedge", ("I_K quasi-Koszul",)))
    if isinstance(r.gl_index, int) and r.gl_index >= 1:
        d = popcount(K.minimal_nonfaces[0])
        out.append(DerivedLabel("skeleton_wedge_bound", 2 * d + r.gl_index, c, "linear_steps_skeleton",
                                (f"I_K generated in degree {d}", f"linear in the first {r.gl_index} steps")))
        out.append(DerivedLabel("partial_formality_degree", 2 * d + r.gl_index - 1, c, "linear_steps_skeleton",
                                (f"I_K generated in degree {d}", f"linear in the first {r.gl_index} steps")))
    if r.is_flag:
        ell = chordless_cycle_threshold(K)
        if ell is not None:
            rr = ell - 3
            out.append(DerivedLabel("skeleton_wedge_bound", rr + 4, c, "flag_chordless_skeleton",
                                    ("K flag", f"no chordless cycles of length <= {rr + 2}")))
    if r.is_gorenstein_star and r.is_AQK:
        n = K.dim + 1
        hyp = ("K Gorenstein*", "I_K almost quasi-Koszul", "K is not a simplex boundary")
        out.append(DerivedLabel("skeleton_wedge_bound", K.m + n - 1, c, "gorenstein_aqk_skeleton", hyp))
        pairs = poincare_sum_pairs(K, coeff)
        out.append(DerivedLabel("rational_connected_sum",
                                {"pairs": [[list(p), mult] for p, mult in pairs.pairs], "g": pairs.genus},
                                c, "gorenstein_aqk_connected_sum", hyp))
        out.append(DerivedLabel("loop_space_product", True, c, "gorenstein_aqk_loop_space", hyp))
        out.append(DerivedLabel("minimally_non_golod", True, c, "gorenstein_aqk_minimally_non_golod", hyp))
    if r.is_componentwise_linear:
        out.append(DerivedLabel("golod", True, c, "componentwise_linear_golod", ("I_K componentwise linear",)))
    return out


def classify(K: SimplicialComplex, coeffs=(QQ,), componentwise: bool = True, max_m: int | None = None,
             max_generators: int | None = None) -> ClassificationReport:
    coeffs = [CoefficientSpec.parse(c) if not isinstance(c, CoefficientSpec) else c for c in coeffs] or [QQ]
    rep = ClassificationReport(K.m, K.dim, K.f_vector, K.facet_lists(), [list(verts(n)) for n in K.minimal_nonfaces])
    for coeff in coeffs:
        res = classify_one(K, coeff, componentwise, max_m, max_generators)
        rep.results[coeff.label] = res
        rep.derived += derived_labels(K, coeff, res)
    return rep


__all__ = [
    "NOT_EQUIGENERATED", "SCHEMA_VERSION", "ClassificationReport", "CoefficientResult", "DerivedLabel",
    "check_implications", "classify", "classify_one", "derived_labels", "green_lazarsfeld_index",
    "has_almost_linear_resolution", "has_linear_resolution", "is_cohen_macaulay", "is_componentwise_almost_linear",
    "is_componentwise_linear", "is_gorenstein_star", "is_sequentially_cm", "projdim_ideal",
]
