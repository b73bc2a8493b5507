"""Text formats: facet lists, Lutz-style libraries, Betti tables, JSON reports.

Facet list grammar (one complex per document)::

    document := line*
    line     := [header | facet] ['#' comment]
    header   := 'm' ['=' | ':'] INT          (at most once, before any facet)
    facet    := INT (sep INT)*               sep is whitespace or ','

Lutz library grammar: records ``NAME = [[a,b,...],[...],...]`` separated by
arbitrary whitespace; ``NAME`` matches ``[A-Za-z_][A-Za-z0-9_.\\-]*``.
"""

from __future__ import annotations

import json
import re

from .complexes import SimplicialComplex, from_facets, verts
from .errors import ValidationError
from .hochster import GradedBettiTable

_HEADER = re.compile(r"^m\s*[=:]?\s*(\S+)$", re.IGNORECASE)


def parse_facet_text(text: str, mode: str = "facets") -> SimplicialComplex:
    """Parse a facet list (or a list of minimal non-faces with ``mode="nonfaces"``)."""
    m = None
    facets = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        h = _HEADER.match(line)
        if h:
            if m is not None or facets:
                raise ValidationError(f"line {lineno}: the m header must come once, before any facet")
            try:
                m = int(h.group(1))
            except ValueError:
                raise ValidationError(f"line {lineno}: m must be an integer, got {h.group(1)!r}") from None
            if m < 1:
                raise ValidationError(f"line {lineno}: m must be positive")
            continue
        if line in ("{}", "∅", "[]"):
            raise ValidationError(f"line {lineno}: empty facet")
        tokens = [t for t in re.split(r"[\s,]+", line) if t]
        face = []
        for t in tokens:
            if not t.isdigit():
                raise ValidationError(f"line {lineno}: non-numeric token {t!r}")
            v = int(t)
            if v < 1:
                raise ValidationError(f"line {lineno}: vertices are 1-based, got {v}")
            face.append(v)
        facets.append((lineno, face))
    if not facets:
        raise ValidationError("no facets in input")
    top = max(max(f) for _, f in facets)
    if m is None:
        m = top
    elif top > m:
        line = next(n for n, f in facets if max(f) > m)
        raise ValidationError(f"line {line}: vertex {top} exceeds m = {m}")
    return from_facets(m, [f for _, f in facets], mode=mode)


def format_facet_text(K: SimplicialComplex, header: bool = True) -> str:
    lines = [f"m {K.m}"] if header else []
    lines += [" ".join(map(str, f)) for f in K.facet_lists()]
    return "\n".join(lines) + "\n"


_RECORD = re.compile(r"([A-Za-z_][A-Za-z0-9_.\-]*)\s*=\s*\[")


def parse_lutz_library(text: str) -> list[tuple[str, SimplicialComplex]]:
    """All records of a Lutz-format library, in document order."""
    out = []
    names = set()
    pos = 0
    while True:
        mt = _RECORD.search(text, pos)
        if mt is None:
            rest = text[pos:].strip()
            if rest:
                raise ValidationError(f"trailing text after the last record: {rest[:40]!r}")
            break
        gap = text[pos:mt.start()].strip()
        if gap:
            raise ValidationError(f"unexpected text before record {mt.group(1)!r}: {gap[:40]!r}")
        name = mt.group(1)
        start = mt.end() - 1
        depth = 0
        end = None
        for k in range(start, len(text)):
            c = text[k]
            if c == "[":
                depth += 1
            elif c == "]":
                depth -= 1
                if depth == 0:
                    end = k + 1
                    break
        if end is None:
            raise ValidationError(f"record {name!r}: unbalanced brackets")
        body = re.sub(r"\s+", "", text[start:end])
        try:
            facets = json.loads(body)
            if not facets or not all(isinstance(f, list) and f and all(isinstance(v, int) and v >= 1 for v in f)
                                     for f in facets):
                raise ValueError("facets must be nonempty lists of positive integers")
            K = from_facets(max(max(f) for f in facets), facets)
        except (ValueError, ValidationError) as e:
            raise ValidationError(f"record {name!r}: {e}") from None
        if name in names:
            raise ValidationError(f"duplicate record name {name!r}")
        names.add(name)
        out.append((name, K))
        pos = end
    return out


# -- Betti tables --------------------------------------------------------------

def render_betti_table(table: GradedBettiTable, total: bool = True) -> str:
    """Macaulay2-style table: columns ``i``, rows ``j - i``, dots for zeros."""
    coarse = {k: v for k, v in table.coarse.items() if v}
    if not coarse:
        return "(zero module)\n"
    cols = range(min(i for i, _ in coarse), max(i for i, _ in coarse) + 1)
    rows = range(min(j - i for i, j in coarse), max(j - i for i, j in coarse) + 1)
    grid = [[str(coarse.get((i, i + r), ".")) for i in cols] for r in rows]
    totals = [str(sum(v for (ii, _), v in coarse.items() if ii == i)) for i in cols]
    labels = [f"{r}:" for r in rows]
    if total:
        labels = ["total:"] + labels
        grid = [totals] + grid
    lw = max(map(len, labels))
    widths = [max(len(str(i)), *(len(row[c]) for row in grid)) for c, i in enumerate(cols)]
    lines = [" " * lw + " " + " ".join(str(i).rjust(w) for i, w in zip(cols, widths))]
    for lab, row in zip(labels, grid):
        lines.append(lab.rjust(lw) + " " + " ".join(x.rjust(w) for x, w in zip(row, widths)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def parse_betti_table(text: str) -> dict:
    """Inverse of :func:`render_betti_table` on the coarse entries."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() == "(zero module)":
        return {}
    cols = [int(x) for x in lines[0].split()]
    out = {}
    for ln in lines[1:]:
        lab, _, rest = ln.strip().partition(":")
        if lab == "total":
            continue
        r = int(lab)
        vals = rest.split()
        if len(vals) != len(cols):
            raise ValidationError(f"row {r}: expected {len(cols)} entries")
        for i, x in zip(cols, vals):
            if x != ".":
                out[(i, i + r)] = int(x)
    return out


def betti_table_to_dict(table: GradedBettiTable, multigraded: bool = False) -> dict:
    d = {
        "module": table.module,
        "coeff": table.spec.label,
        "projdim": table.projdim,
        "regularity": table.regularity,
        "coarse": [[i, j, v] for (i, j), v in sorted(table.coarse.items())],
    }
    if multigraded:
        d["multigraded"] = [[i, _multidegree_json(b), v] for (i, b), v in
                            sorted(table.multigraded.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))]
    return d


def _multidegree_json(b):
    return list(b) if isinstance(b, tuple) else list(verts(b))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"
