"""Finite truncated simplicial sets and simplicial maps.

Simplices of each level are an indexed set ``0..k-1``; face and degeneracy
maps are integer arrays (entry ``x`` is the image of simplex ``x``).
Degenerate simplices are stored explicitly.
"""
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement

import numpy as np

from .errors import CheckFailed, StructuralError
from .quotient import coequalize, representatives


def _frozen(arr):
    arr = np.array(arr, dtype=np.int64).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FinSimplicialSet:
    sizes: tuple
    faces: tuple  # faces[n][i]: X_n -> X_{n-1}; faces[0] == ()
    degeneracies: tuple  # degeneracies[n][i]: X_n -> X_{n+1}, n < N

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        if not sizes or any(s < 0 for s in sizes):
            raise StructuralError("sizes must be a non-empty list of non-negative integers")
        N = len(sizes) - 1
        if len(self.faces) != N + 1 or len(self.degeneracies) != N + 1:
            raise StructuralError(f"expected face and degeneracy tables for levels 0..{N}")
        faces, degens = [], []
        for n in range(N + 1):
            fs = tuple(_frozen(f) for f in self.faces[n])
            ds = tuple(_frozen(d) for d in self.degeneracies[n])
            if len(fs) != (n + 1 if n >= 1 else 0):
                raise StructuralError(f"level {n}: expected {n + 1 if n else 0} face maps, got {len(fs)}")
            if len(ds) != (n + 1 if n < N else 0):
                raise StructuralError(f"level {n}: expected {n + 1 if n < N else 0} degeneracies, got {len(ds)}")
            for i, f in enumerate(fs):
                _check_table(f, sizes[n], sizes[n - 1], f"d_{i} on level {n}")
            for i, d in enumerate(ds):
                _check_table(d, sizes[n], sizes[n + 1], f"s_{i} on level {n}")
            faces.append(fs)
            degens.append(ds)
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "faces", tuple(faces))
        object.__setattr__(self, "degeneracies", tuple(degens))

    @property
    def trunc_degree(self):
        return len(self.sizes) - 1

    def face(self, n, i):
        return self.faces[n][i]

    def degeneracy(self, n, i):
        return self.degeneracies[n][i]

    def __repr__(self):
        return f"FinSimplicialSet(N={self.trunc_degree}, sizes={list(self.sizes)})"


def _check_table(arr, domain, codomain, what):
    if arr.shape != (domain,):
        raise StructuralError(f"{what}: expected {domain} entries, got {arr.shape[0]}")
    if domain and (arr.min() < 0 or arr.max() >= codomain):
        raise StructuralError(f"{what}: image outside 0..{codomain - 1}")


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def clean(self):
        return not self.violations

    def to_dict(self):
        return {"clean": self.clean, "violations": self.violations}


def _compare(report, name, level, lhs, rhs):
    bad = np.flatnonzero(lhs != rhs)
    if bad.size:
        x = int(bad[0])
        report.violations.append(
            {"identity": name, "level": level, "simplex": x, "lhs": int(lhs[x]), "rhs": int(rhs[x]),
             "count": int(bad.size)})


def validate_identities(X):
    """Check every simplicial identity defined within the truncation.

    Returns a report with one entry (and a witness simplex) per violated identity
    instance; structural problems are raised by the constructor instead.
    """
    report = ValidationReport()
    N = X.trunc_degree
    d, s = X.faces, X.degeneracies
    for n in range(2, N + 1):
        for j in range(1, n + 1):
            for i in range(j):
                _compare(report, f"d_{i} d_{j} = d_{j - 1} d_{i}", n,
                         d[n - 1][i][d[n][j]], d[n - 1][j - 1][d[n][i]])
    for n in range(0, N - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                _compare(report, f"s_{i} s_{j} = s_{j + 1} s_{i}", n,
                         s[n + 1][i][s[n][j]], s[n + 1][j + 1][s[n][i]])
    for n in range(0, N):
        ident = np.arange(X.sizes[n])
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = d[n + 1][i][s[n][j]]
                if i < j:
                    _compare(report, f"d_{i} s_{j} = s_{j - 1} d_{i}", n, lhs, s[n - 1][j - 1][d[n][i]])
                elif i in (j, j + 1):
                    _compare(report, f"d_{i} s_{j} = id", n, lhs, ident)
                else:
                    _compare(report, f"d_{i} s_{j} = s_{j} d_{i - 1}", n, lhs, s[n - 1][j][d[n][i - 1]])
    return report


def checked(X):
    """Return ``X`` after asserting the simplicial identities; used by every constructor."""
    report = validate_identities(X)
    if not report.clean:
        raise CheckFailed("simplicial identities violated", report.violations)
    return X


def nondegenerate(X, n):
    """Boolean mask of nondegenerate simplices in level ``n``."""
    mask = np.ones(X.sizes[n], dtype=bool)
    if n >= 1:
        for sd in X.degeneracies[n - 1]:
            mask[sd] = False
    return mask


def vertex(X, n, k=0):
    """Map sending an ``n``-simplex to its ``k``-th vertex in ``X_0``."""
    out = np.arange(X.sizes[n])
    # remove vertices above k, then below k
    for m in range(n, k, -1):
        out = X.faces[m][m][out]
    for m in range(k, 0, -1):
        out = X.faces[m][0][out]
    return out


# ---------------------------------------------------------------- constructors

def constant(npoints, N):
    """Constant simplicial set on ``npoints`` points: every structure map is the identity."""
    ident = np.arange(npoints)
    return FinSimplicialSet(
        sizes=(npoints,) * (N + 1),
        faces=tuple(tuple(ident for _ in range(n + 1)) if n else () for n in range(N + 1)),
        degeneracies=tuple(tuple(ident for _ in range(n + 1)) if n < N else () for n in range(N + 1)),
    )


def point(N):
    return constant(1, N)


def empty(N):
    return constant(0, N)


def _complex_sequences(maximal, N):
    faces_of = set()
    for simplex in maximal:
        simplex = tuple(sorted(set(simplex)))
        for r in range(1, len(simplex) + 1):
            faces_of.update(combinations(simplex, r))
    vertices = sorted({v for f in faces_of for v in f})
    return [[seq for seq in combinations_with_replacement(vertices, n + 1)
             if tuple(sorted(set(seq))) in faces_of] for n in range(N + 1)]


def ordered_complex(maximal, N):
    """Simplicial set of an ordered simplicial complex, truncated at ``N``.

    ``maximal`` lists simplices as vertex tuples; their vertices are ordered by
    value. The ``n``-simplices are the nondecreasing length ``n + 1`` sequences
    whose vertex set is a face of some maximal simplex, listed lexicographically.
    """
    return _from_sequences(_complex_sequences(maximal, N))


def ordered_inclusion(sub, maximal, N):
    """Inclusion of the complex generated by ``sub`` into the one generated by ``maximal``."""
    small, big = _complex_sequences(sub, N), _complex_sequences(maximal, N)
    index = [{seq: k for k, seq in enumerate(level)} for level in big]
    try:
        comps = [np.asarray([index[n][seq] for seq in level], dtype=np.int64) for n, level in enumerate(small)]
    except KeyError:
        raise StructuralError("sub is not a subcomplex") from None
    return simplicial_map(_from_sequences(small), _from_sequences(big), comps)


def _from_sequences(levels):
    N = len(levels) - 1
    index = [{seq: k for k, seq in enumerate(level)} for level in levels]
    faces, degens = [], []
    for n, level in enumerate(levels):
        if n == 0:
            faces.append(())
        else:
            faces.append(tuple([index[n - 1][seq[:i] + seq[i + 1:]] for seq in level] for i in range(n + 1)))
        if n < N:
            degens.append(tuple([index[n + 1][seq[:i + 1] + seq[i:]] for seq in level] for i in range(n + 1)))
        else:
            degens.append(())
    return checked(FinSimplicialSet(tuple(len(l) for l in levels), tuple(faces), tuple(degens)))


def standard_simplex(k, N):
    """The standard simplex on ``k + 1`` vertices."""
    return ordered_complex([tuple(range(k + 1))], N)


def boundary_simplex(k, N):
    """Boundary of the standard ``k``-simplex (for ``k = 1`` two points)."""
    verts = tuple(range(k + 1))
    return ordered_complex([verts[:i] + verts[i + 1:] for i in range(k + 1)], N)


def simplex_sequences(k, n):
    """Lexicographic list of the ``n``-simplices of the standard ``k``-simplex."""
    return list(combinations_with_replacement(range(k + 1), n + 1))


# ---------------------------------------------------------------- maps

@dataclass(frozen=True, eq=False)
class SimplicialMap:
    source: FinSimplicialSet
    target: FinSimplicialSet
    components: tuple

    def __post_init__(self):
        if self.source.trunc_degree != self.target.trunc_degree:
            raise StructuralError("source and target have different truncation degrees")
        comps = tuple(_frozen(c) for c in self.components)
        if len(comps) != self.source.trunc_degree + 1:
            raise StructuralError("one component per level required")
        for n, c in enumerate(comps):
            _check_table(c, self.source.sizes[n], self.target.sizes[n], f"component {n}")
        object.__setattr__(self, "components", comps)

    def violations(self):
        X, Y, f = self.source, self.target, self.components
        out = []
        for n in range(1, X.trunc_degree + 1):
            for i in range(n + 1):
                bad = np.flatnonzero(f[n - 1][X.faces[n][i]] != Y.faces[n][i][f[n]])
                if bad.size:
                    out.append({"commutes_with": f"d_{i}", "level": n, "simplex": int(bad[0])})
        for n in range(X.trunc_degree):
            for i in range(n + 1):
                bad = np.flatnonzero(f[n + 1][X.degeneracies[n][i]] != Y.degeneracies[n][i][f[n]])
                if bad.size:
                    out.append({"commutes_with": f"s_{i}", "level": n, "simplex": int(bad[0])})
        return out


def simplicial_map(source, target, components):
    """Build a map and assert it commutes with all structure maps."""
    f = SimplicialMap(source, target, components)
    bad = f.violations()
    if bad:
        raise CheckFailed("components do not commute with the simplicial structure", bad)
    return f


def identity_map(X):
    return SimplicialMap(X, X, tuple(np.arange(s) for s in X.sizes))


def compose(g, f):
    """``g`` after ``f``."""
    return SimplicialMap(f.source, g.target, tuple(gc[fc] for gc, fc in zip(g.components, f.components)))


def is_levelwise_injective(f):
    return all(np.unique(c).size == c.size for c in f.components)


def is_isomorphism(f):
    return is_levelwise_injective(f) and all(
        c.size == t for c, t in zip(f.components, f.target.sizes))


def _require_same_truncation(*objects):
    degrees = {o.trunc_degree for o in objects}
    if len(degrees) != 1:
        raise StructuralError(f"mismatched truncation degrees {sorted(degrees)}")


# ---------------------------------------------------------------- products

def product(X, Y):
    """Levelwise product; the pair ``(x, y)`` has index ``x * |Y_n| + y``."""
    _require_same_truncation(X, Y)
    N = X.trunc_degree
    sizes = tuple(X.sizes[n] * Y.sizes[n] for n in range(N + 1))
    faces, degens = [], []
    for n in range(N + 1):
        xs, ys = np.divmod(np.arange(sizes[n]), Y.sizes[n]) if Y.sizes[n] else (np.zeros(0, int),) * 2
        faces.append(tuple(X.faces[n][i][xs] * Y.sizes[n - 1] + Y.faces[n][i][ys] for i in range(n + 1))
                     if n else ())
        degens.append(tuple(X.degeneracies[n][i][xs] * Y.sizes[n + 1] + Y.degeneracies[n][i][ys]
                            for i in range(n + 1)) if n < N else ())
    return checked(FinSimplicialSet(sizes, tuple(faces), tuple(degens)))


def projections(X, Y):
    P = product(X, Y)
    first, second = [], []
    for n in range(X.trunc_degree + 1):
        xs, ys = np.divmod(np.arange(P.sizes[n]), Y.sizes[n]) if Y.sizes[n] else (np.zeros(0, int),) * 2
        first.append(xs)
        second.append(ys)
    return simplicial_map(P, X, first), simplicial_map(P, Y, second)


def product_map(f, g):
    """``f x g`` between the levelwise products."""
    src, tgt = product(f.source, g.source), product(f.target, g.target)
    comps = []
    for n in range(src.trunc_degree + 1):
        ny = g.source.sizes[n]
        xs, ys = np.divmod(np.arange(src.sizes[n]), ny) if ny else (np.zeros(0, int),) * 2
        comps.append(f.components[n][xs] * g.target.sizes[n] + g.components[n][ys])
    return simplicial_map(src, tgt, comps)


# ---------------------------------------------------------------- components

@dataclass(frozen=True)
class Pi0:
    labels: np.ndarray  # component label of each 0-simplex
    count: int
    warning: str = ""

    def components(self):
        return [np.flatnonzero(self.labels == c).tolist() for c in range(self.count)]


def pi0(X):
    """Connected components: the coequalizer of ``d_0, d_1: X_1 -> X_0``.

    Labels are canonical: component ``c`` is the one whose least vertex is the
    ``c``-th smallest among component minima.
    """
    if X.trunc_degree == 0:
        labels = np.arange(X.sizes[0])
        return Pi0(labels, X.sizes[0], "truncation 0: no 1-simplices, X_0 returned as is")
    labels = coequalize(X.sizes[0], X.faces[1][0], X.faces[1][1])
    return Pi0(labels, int(labels.max()) + 1 if labels.size else 0)


def pi0_map(f):
    """Induced map on components, as an array indexed by source component."""
    ps, pt = pi0(f.source), pi0(f.target)
    out = np.full(ps.count, -1, dtype=np.int64)
    out[ps.labels] = pt.labels[f.components[0]]
    return out, ps, pt


def disjoint_union(X, Y):
    _require_same_truncation(X, Y)
    N = X.trunc_degree
    faces, degens = [], []
    for n in range(N + 1):
        faces.append(tuple(np.concatenate([X.faces[n][i], Y.faces[n][i] + X.sizes[n - 1]])
                           for i in range(n + 1)) if n else ())
        degens.append(tuple(np.concatenate([X.degeneracies[n][i], Y.degeneracies[n][i] + X.sizes[n + 1]])
                            for i in range(n + 1)) if n < N else ())
    return checked(FinSimplicialSet(tuple(a + b for a, b in zip(X.sizes, Y.sizes)), tuple(faces), tuple(degens)))


# ---------------------------------------------------------------- pushouts

@dataclass(frozen=True)
class Pushout:
    obj: FinSimplicialSet
    inl: SimplicialMap
    inr: SimplicialMap


def pushout(i, j):
    """Pushout of ``X <-i- C -j-> Y``, computed levelwise by union-find on ``X_n + Y_n``.

    Each class is labelled by its least member in the concatenation ``X_n + Y_n``.
    """
    if i.source is not j.source and (i.source.sizes != j.source.sizes):
        raise StructuralError("pushout legs must share their source")
    _require_same_truncation(i.source, i.target, j.target)
    X, Y = i.target, j.target
    N = X.trunc_degree
    labels = []
    for n in range(N + 1):
        labels.append(coequalize(X.sizes[n] + Y.sizes[n], i.components[n], j.components[n] + X.sizes[n]))
    sizes = tuple(int(l.max()) + 1 if l.size else 0 for l in labels)
    reps = [representatives(l) for l in labels]

    def through(n, m, xmap, ymap):
        r = reps[n]
        out = np.empty(r.size, dtype=np.int64)
        in_x = r < X.sizes[n]
        out[in_x] = labels[m][xmap[r[in_x]]]
        out[~in_x] = labels[m][ymap[r[~in_x] - X.sizes[n]] + X.sizes[m]]
        return out

    faces = [()] + [tuple(through(n, n - 1, X.faces[n][k], Y.faces[n][k]) for k in range(n + 1))
                    for n in range(1, N + 1)]
    degens = [tuple(through(n, n + 1, X.degeneracies[n][k], Y.degeneracies[n][k]) for k in range(n + 1))
              for n in range(N)] + [()]
    P = checked(FinSimplicialSet(sizes, tuple(faces), tuple(degens)))
    inl = simplicial_map(X, P, [labels[n][:X.sizes[n]] for n in range(N + 1)])
    inr = simplicial_map(Y, P, [labels[n][X.sizes[n]:] for n in range(N + 1)])
    return Pushout(P, inl, inr)


def universal_map(po, f, g):
    """The map out of a pushout induced by ``f: X -> Z`` and ``g: Y -> Z`` agreeing on the source."""
    Z = f.target
    comps = []
    for n in range(po.obj.trunc_degree + 1):
        out = np.full(po.obj.sizes[n], -1, dtype=np.int64)
        out[po.inl.components[n]] = f.components[n]
        check = out[po.inr.components[n]]
        filled = check >= 0
        if np.any(check[filled] != g.components[n][filled]):
            raise CheckFailed("maps do not agree on the pushout source", {"level": n})
        out[po.inr.components[n]] = g.components[n]
        comps.append(out)
    return simplicial_map(po.obj, Z, comps)


@dataclass(frozen=True)
class PushoutProduct:
    map: SimplicialMap
    injective: bool
    isomorphism: bool
    non_injective_levels: list

    def to_dict(self):
        return {"domain_sizes": list(self.map.source.sizes), "codomain_sizes": list(self.map.target.sizes),
                "levelwise_injective": self.injective, "isomorphism": self.isomorphism,
                "non_injective_levels": self.non_injective_levels}


def pushout_product(f, g):
    """Pushout-corner map ``(A1 x B2) + _{A1 x B1} (A2 x B1) -> A2 x B2``.

    Inputs must be levelwise injective (cofibrations of simplicial sets).
    """
    for name, h in (("f", f), ("g", g)):
        if not is_levelwise_injective(h):
            raise StructuralError(f"{name} is not levelwise injective; cofibrations are monomorphisms")
    _require_same_truncation(f.source, g.source)
    idA1, idB1 = identity_map(f.source), identity_map(g.source)
    idA2, idB2 = identity_map(f.target), identity_map(g.target)
    po = pushout(product_map(idA1, g), product_map(f, idB1))
    corner = universal_map(po, product_map(f, idB2), product_map(idA2, g))
    bad = [n for n, c in enumerate(corner.components) if np.unique(c).size != c.size]
    return PushoutProduct(corner, not bad, is_isomorphism(corner), bad)
