"""Text and JSON interchange formats.

Monoid table::

    # optional comments
    3 0
    0 1 2
    1 1 1
    2 2 2

First line: order and identity index; then one row per element, with
``table[i][j]`` the index of ``i * j``.

Simplicial set (JSON): ``trunc_degree``, ``sizes``, ``faces`` (``faces[n][i]``
lists the image of every ``n``-simplex, ``faces[0] == []``) and
``degeneracies`` (``degeneracies[N] == []``). A simplicial map adds
``source``, ``target`` and ``components``. A bimodule lists ``monoid`` (inline
table object or a path to a table file), ``size``, ``left`` (``left[a][m]``)
and ``right`` (``right[m][b]``). A Segal object lists ``levels`` (simplicial
sets) and outer ``faces`` / ``degeneracies`` given by their components.
"""
import json
from pathlib import Path

import numpy as np

from .bimodule import bimodule
from .errors import StructuralError
from .monoid import FiniteMonoid, canonical
from .segal import SegalObject
from .simplicial import FinSimplicialSet, SimplicialMap, checked


def _ints(rows):
    return [[int(x) for x in np.asarray(r).tolist()] for r in rows]


def dumps(obj):
    """Canonical JSON text: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


# ---------------------------------------------------------------- monoids

def parse_monoid(text, name=""):
    rows = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows or len(rows[0]) != 2:
        raise StructuralError("first line must be: order identity")
    try:
        n, e = int(rows[0][0]), int(rows[0][1])
        table = [[int(x) for x in r] for r in rows[1:]]
    except ValueError as exc:
        raise StructuralError(f"non-integer entry: {exc}") from None
    if len(table) != n or any(len(r) != n for r in table):
        raise StructuralError(f"expected {n} rows of {n} entries")
    return FiniteMonoid(np.array(table, dtype=np.int64).reshape(n, n), e, name)


def format_monoid(M):
    lines = [f"{M.order} {M.identity}"]
    lines += [" ".join(str(int(x)) for x in row) for row in M.table]
    return "\n".join(lines) + "\n"


def read_monoid(path):
    path = Path(path)
    return parse_monoid(path.read_text(), path.stem)


def monoid_to_dict(M, canonicalize=False):
    if canonicalize:
        M, _ = canonical(M)
    return {"order": M.order, "identity": M.identity, "table": _ints(M.table)}


def monoid_from_dict(d, name=""):
    return FiniteMonoid(np.asarray(d["table"], dtype=np.int64), d["identity"], name)


# ---------------------------------------------------------------- simplicial sets and maps

def sset_to_dict(X):
    return {"trunc_degree": X.trunc_degree, "sizes": list(X.sizes),
            "faces": [_ints(fs) for fs in X.faces],
            "degeneracies": [_ints(ds) for ds in X.degeneracies]}


def sset_from_dict(d, check=True):
    try:
        X = FinSimplicialSet(tuple(d["sizes"]), tuple(tuple(np.asarray(f, dtype=np.int64) for f in fs)
                                                      for fs in d["faces"]),
                             tuple(tuple(np.asarray(s, dtype=np.int64) for s in ss) for ss in d["degeneracies"]))
    except KeyError as exc:
        raise StructuralError(f"missing field {exc}") from None
    if X.trunc_degree != d.get("trunc_degree", X.trunc_degree):
        raise StructuralError("trunc_degree does not match the number of levels")
    return checked(X) if check else X


def map_to_dict(f):
    return {"source": sset_to_dict(f.source), "target": sset_to_dict(f.target),
            "components": _ints(f.components)}


def map_from_dict(d):
    f = SimplicialMap(sset_from_dict(d["source"]), sset_from_dict(d["target"]),
                      tuple(np.asarray(c, dtype=np.int64) for c in d["components"]))
    return f


# ---------------------------------------------------------------- bimodules

def bimodule_to_dict(B):
    return {"monoid": monoid_to_dict(B.monoid), "size": B.size,
            "left": _ints(B.left), "right": _ints(B.right)}


def bimodule_from_dict(d, base=None):
    ref = d["monoid"]
    if isinstance(ref, str):
        A = read_monoid(Path(base or ".") / ref)
    else:
        A = monoid_from_dict(ref)
    B = bimodule(A, np.asarray(d["left"], dtype=np.int64), np.asarray(d["right"], dtype=np.int64))
    if B.size != d["size"]:
        raise StructuralError("size does not match the action tables")
    return B


# ---------------------------------------------------------------- Segal objects

def segal_to_dict(X):
    return {"trunc_degree": X.trunc_degree, "levels": [sset_to_dict(L) for L in X.levels],
            "faces": [[_ints(f.components) for f in fs] for fs in X.faces],
            "degeneracies": [[_ints(s.components) for s in ss] for ss in X.degeneracies]}


def segal_from_dict(d):
    levels = tuple(sset_from_dict(L) for L in d["levels"])

    def maps(table, shift):
        return tuple(tuple(SimplicialMap(levels[k], levels[k + shift],
                                         tuple(np.asarray(c, dtype=np.int64) for c in comps))
                           for comps in per_k) for k, per_k in enumerate(table))

    X = SegalObject(levels, maps(d["faces"], -1), maps(d["degeneracies"], 1))
    if X.trunc_degree != d.get("trunc_degree", X.trunc_degree):
        raise StructuralError("trunc_degree does not match the number of levels")
    return X


# ---------------------------------------------------------------- files

def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def load(path):
    """Load a monoid table or a JSON document, guessing the kind from its fields."""
    path = Path(path)
    text = path.read_text()
    if not text.lstrip().startswith("{"):
        return "monoid", parse_monoid(text, path.stem)
    try:
        return _load_json(json.loads(text), path)
    except (KeyError, TypeError, ValueError) as exc:
        raise StructuralError(f"malformed document: {exc!r}") from None


def _load_json(d, path):
    if "levels" in d:
        return "segal", segal_from_dict(d)
    if "components" in d:
        return "map", map_from_dict(d)
    if "left" in d:
        return "bimodule", bimodule_from_dict(d, path.parent)
    if "table" in d:
        return "monoid", monoid_from_dict(d, path.stem)
    if "sizes" in d:
        return "sset", sset_from_dict(d, check=False)
    raise StructuralError("unrecognised document")
