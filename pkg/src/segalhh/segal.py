"""Segal conditions for truncated simplicial objects in sets, simplicial sets and monoids.

A ``SegalObject`` has levels ``X_0 .. X_K``, each a ``FinSimplicialSet`` (a
plain set is a constant one), and outer faces and degeneracies that are
simplicial maps. The Segal map ``X_k -> X_1 x ... x X_1`` has one factor per
spine edge ``[i-1, i]`` of ``[k]``. That factor removes the vertices above
``i`` with ``d_k, d_{k-1}, .., d_{i+1}`` and then the vertices below ``i-1``
with ``i-1`` applications of ``d_0``. For ``k = 2`` the two factors are ``d_2``
and ``d_0``; on the nerve of a monoid they send ``(a, b)`` to ``a`` and ``b``.
"""
from dataclasses import dataclass, field

import numpy as np

from .chains import homology_equivalent
from .errors import StructuralError, TruncationError
from .monoid import _digits, _nerve_set, _number, product_monoid, trivial
from .simplicial import (FinSimplicialSet, SimplicialMap, checked, constant, is_isomorphism, product,
                         validate_identities)

MODES = ("strict", "surrogate")


@dataclass(frozen=True, eq=False)
class SegalObject:
    levels: tuple  # X_0..X_K, FinSimplicialSets with a common truncation
    faces: tuple  # faces[k][i]: SimplicialMap X_k -> X_{k-1}
    degeneracies: tuple  # degeneracies[k][i]: X_k -> X_{k+1}

    def __post_init__(self):
        K = len(self.levels) - 1
        if K < 0:
            raise StructuralError("a Segal object needs at least level 0")
        if len(self.faces) != K + 1 or len(self.degeneracies) != K + 1:
            raise StructuralError("faces and degeneracies must be listed for every level")
        inner = {X.trunc_degree for X in self.levels}
        if len(inner) != 1:
            raise StructuralError("levels must share one truncation degree")
        for k in range(K + 1):
            if len(self.faces[k]) != (k + 1 if k else 0):
                raise StructuralError(f"level {k} needs {k + 1 if k else 0} faces")
            if len(self.degeneracies[k]) != (k + 1 if k < K else 0):
                raise StructuralError(f"level {k} has the wrong number of degeneracies")
            for i, f in enumerate(self.faces[k]):
                if f.source is not self.levels[k] or f.target is not self.levels[k - 1]:
                    raise StructuralError(f"d_{i} on level {k} has the wrong endpoints")
            for i, s in enumerate(self.degeneracies[k]):
                if s.source is not self.levels[k] or s.target is not self.levels[k + 1]:
                    raise StructuralError(f"s_{i} on level {k} has the wrong endpoints")

    @property
    def trunc_degree(self):
        return len(self.levels) - 1

    @property
    def inner_degree(self):
        return self.levels[0].trunc_degree

    def outer_violations(self):
        """Simplicial identities in the outer direction, checked in every inner degree."""
        out = []
        for n in range(self.inner_degree + 1):
            faces = tuple(tuple(f.components[n] for f in fs) for fs in self.faces)
            degens = tuple(tuple(s.components[n] for s in ss) for ss in self.degeneracies)
            X = FinSimplicialSet(tuple(L.sizes[n] for L in self.levels), faces, degens)
            rep = validate_identities(X)
            out += [{"inner_degree": n, **v} for v in rep.violations]
        return out


def _compose_components(maps, n, start):
    x = start
    for f in maps:
        x = f.components[n][x]
    return x


def spine_components(X, k, i, n):
    """Component in inner degree ``n`` of ``X_k -> X_1`` for spine edge ``i``."""
    maps = [X.faces[j][j] for j in range(k, i, -1)]  # d_k, then d_{k-1}, .., d_{i+1}
    maps += [X.faces[j][0] for j in range(i, 1, -1)]  # d_0, i-1 times, on X_i .. X_2
    return _compose_components(maps, n, np.arange(X.levels[k].sizes[n]))


def segal_map(X, k):
    """The map ``X_k -> X_1^k`` into the iterated product (left-nested)."""
    X1 = X.levels[1]
    target = X1
    for _ in range(k - 1):
        target = product(target, X1)
    comps = []
    for n in range(X.inner_degree + 1):
        idx = spine_components(X, k, 1, n)
        for i in range(2, k + 1):
            idx = idx * X1.sizes[n] + spine_components(X, k, i, n)
        comps.append(idx)
    return SimplicialMap(X.levels[k], target, tuple(comps))


@dataclass
class SegalReport:
    mode: str
    s0_pass: bool
    levels: list  # one dict per k = 1..K
    identities_ok: bool = True
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.identities_ok and self.s0_pass and all(v["pass"] for v in self.levels)

    def to_dict(self):
        return {"ok": self.ok, "mode": self.mode, "s0_pass": self.s0_pass,
                "identities_ok": self.identities_ok, "levels": self.levels, "notes": self.notes}


def check_segal(X, mode="strict", degree=None):
    """[S0] and [S1] for ``1 <= k <= K``; strict asks for bijections, surrogate for homology equivalences."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if X.trunc_degree < 1:
        raise TruncationError("Segal checks need outer truncation at least 1")
    if mode == "surrogate":
        degree = X.inner_degree - 1 if degree is None else degree
        if degree < 0 or degree > X.inner_degree - 1:
            raise TruncationError(f"surrogate degree {degree} needs inner truncation at least {degree + 1}")
    bad = X.outer_violations()
    s0 = all(s == 1 for s in X.levels[0].sizes)
    levels = []
    for k in range(1, X.trunc_degree + 1):
        f = segal_map(X, k)
        entry = {"k": k, "source_sizes": list(f.source.sizes), "target_sizes": list(f.target.sizes)}
        if mode == "strict":
            entry["pass"] = bool(is_isomorphism(f))
        else:
            eq = homology_equivalent(f, degree)
            entry["pass"] = bool(eq.equivalent)
            entry["equivalence"] = eq.to_dict()
        levels.append(entry)
    notes = [] if not bad else ["outer simplicial identities fail"]
    return SegalReport(mode, bool(s0), levels, not bad, notes + ([{"violations": bad[:3]}] if bad else []))


# ---------------------------------------------------------------- constructions

def _constant_map(source, target, values):
    values = np.asarray(values, dtype=np.int64)
    return SimplicialMap(source, target, tuple(values for _ in range(source.trunc_degree + 1)))


def from_sets(sizes, faces, degeneracies, inner=1):
    """Segal object of constant simplicial sets from plain set maps."""
    levels = tuple(constant(int(s), inner) for s in sizes)
    fs = tuple(tuple(_constant_map(levels[k], levels[k - 1], f) for f in faces[k]) for k in range(len(levels)))
    ds = tuple(tuple(_constant_map(levels[k], levels[k + 1], s) for s in degeneracies[k]) for k in range(len(levels)))
    return SegalObject(levels, fs, ds)


def nerve_segal_object(A, K, inner=1):
    """The nerve of ``A`` as a Segal object in sets (constant simplicial sets)."""
    if K < 1:
        raise TruncationError("nerve needs truncation at least 1")
    X = _nerve_set(A, K)
    return from_sets(X.sizes, X.faces, X.degeneracies, inner)


def point_object(K, inner=1):
    return nerve_segal_object(trivial(), K, inner)


def simplicial_monoid_nerve(S, K):
    """Levelwise nerve of a simplicial monoid: ``X_k`` has ``n``-simplices ``A_n^k``."""
    if K < 1:
        raise TruncationError("nerve needs truncation at least 1")
    bad = S.violations()
    if bad:
        raise StructuralError(f"not a simplicial monoid: {bad[0]}")
    N = S.trunc_degree
    nerves = [_nerve_set(M, K) for M in S.levels]
    orders = [M.order for M in S.levels]

    def apply(n_from, n_to, k, f):
        dig = _digits(np.arange(orders[n_from] ** k), orders[n_from], k)
        out = _number([np.asarray(f)[d] for d in dig], orders[n_to])
        return out if k else np.zeros(1, dtype=np.int64)

    levels = []
    for k in range(K + 1):
        faces = [()] + [tuple(apply(n, n - 1, k, f) for f in S.faces[n]) for n in range(1, N + 1)]
        degens = [tuple(apply(n, n + 1, k, s) for s in S.degeneracies[n]) for n in range(N)] + [()]
        levels.append(checked(FinSimplicialSet(tuple(o ** k for o in orders), tuple(faces), tuple(degens))))
    fs = tuple(tuple(SimplicialMap(levels[k], levels[k - 1], tuple(nv.faces[k][i] for nv in nerves))
                     for i in range(k + 1)) if k else () for k in range(K + 1))
    ds = tuple(tuple(SimplicialMap(levels[k], levels[k + 1], tuple(nv.degeneracies[k][i] for nv in nerves))
                     for i in range(k + 1)) if k < K else () for k in range(K + 1))
    return SegalObject(tuple(levels), fs, ds)


@dataclass
class NerveCheck:
    report: SegalReport
    counts: list  # (k, |X_k|, |X_1|^k)
    elementwise_identity: bool

    @property
    def ok(self):
        return self.report.ok and self.elementwise_identity and all(a == b for _, a, b in self.counts)

    def to_dict(self):
        return {"ok": self.ok, "counts": [list(c) for c in self.counts],
                "elementwise_identity": self.elementwise_identity, **{"segal": self.report.to_dict()}}


def nerve_strict_check(A, K):
    """Strict Segal check on the nerve; with tuples indexed first-entry-most-significant
    the Segal map is the identity on indices."""
    X = nerve_segal_object(A, K)
    report = check_segal(X, "strict")
    counts, ident = [], True
    for k in range(1, K + 1):
        f = segal_map(X, k)
        counts.append((k, X.levels[k].sizes[0], X.levels[1].sizes[0] ** k))
        ident &= bool(np.array_equal(f.components[0], np.arange(X.levels[k].sizes[0])))
    return NerveCheck(report, counts, ident)


# ---------------------------------------------------------------- doubly indexed objects

@dataclass(frozen=True, eq=False)
class DoubleSegalObject:
    """Outer levels are Segal objects (the inner direction); outer structure maps
    are given per inner level as simplicial maps."""
    levels: tuple  # levels[p]: SegalObject
    faces: tuple  # faces[p][i][q]: SimplicialMap levels[p].levels[q] -> levels[p-1].levels[q]
    degeneracies: tuple

    @property
    def trunc_degree(self):
        return len(self.levels) - 1

    @property
    def inner_trunc(self):
        return self.levels[0].trunc_degree

    def column(self, q):
        """The outer-direction Segal object at inner level ``q``."""
        return SegalObject(tuple(L.levels[q] for L in self.levels),
                           tuple(tuple(f[q] for f in fs) for fs in self.faces),
                           tuple(tuple(s[q] for s in ss) for ss in self.degeneracies))

    def morphism_violations(self):
        """Outer structure maps must commute with the inner faces and degeneracies."""
        out = []
        Q = self.inner_trunc
        for kind, maps, shift in (("d", self.faces, -1), ("s", self.degeneracies, 1)):
            for p, per_i in enumerate(maps):
                for i, per_q in enumerate(per_i):
                    src, dst = self.levels[p], self.levels[p + shift]
                    for q in range(Q + 1):
                        for j, g in enumerate(src.faces[q]):
                            h = dst.faces[q][j]
                            for n in range(src.inner_degree + 1):
                                lhs = per_q[q - 1].components[n][g.components[n]]
                                rhs = h.components[n][per_q[q].components[n]]
                                if not np.array_equal(lhs, rhs):
                                    out.append({"outer": f"{kind}_{i}", "p": p, "inner_face": j, "q": q})
                        for j, g in enumerate(src.degeneracies[q]):
                            h = dst.degeneracies[q][j]
                            for n in range(src.inner_degree + 1):
                                lhs = per_q[q + 1].components[n][g.components[n]]
                                rhs = h.components[n][per_q[q].components[n]]
                                if not np.array_equal(lhs, rhs):
                                    out.append({"outer": f"{kind}_{i}", "p": p, "inner_degeneracy": j, "q": q})
        return out


@dataclass
class TwoMonoidReport:
    outer_s0: bool
    outer: list  # SegalReport per inner level q
    inner: list  # SegalReport per outer level p
    morphisms_ok: bool
    witness: object = None

    @property
    def ok(self):
        return (self.outer_s0 and self.morphisms_ok and all(r.ok for r in self.outer)
                and all(r.ok for r in self.inner))

    def to_dict(self):
        return {"ok": self.ok, "outer_s0": self.outer_s0, "morphisms_ok": self.morphisms_ok,
                "outer": [r.to_dict() for r in self.outer], "inner": [r.to_dict() for r in self.inner],
                "witness": self.witness}


def check_2monoid(X, mode="strict", degree=None):
    """Segal conditions in both directions, plus that outer maps are maps of inner objects."""
    if X.trunc_degree < 1 or X.inner_trunc < 1:
        raise TruncationError("both truncations must be at least 1")
    bad = X.morphism_violations()
    inner = [check_segal(L, mode, degree) for L in X.levels]
    outer = [check_segal(X.column(q), mode, degree) for q in range(X.inner_trunc + 1)]
    s0 = all(all(s == 1 for s in Y.sizes) for Y in X.levels[0].levels)
    return TwoMonoidReport(bool(s0), outer, inner, not bad, bad[0] if bad else None)


def double_nerve(A, K, L=None, inner=1):
    """``X_{p, q} = (A^p)^q``: the inner direction is the nerve of the product monoid ``A^p``,
    the outer direction applies the nerve structure of ``A`` to each of the ``q`` entries."""
    L = K if L is None else L
    q0 = A.order
    powers = [trivial()]
    for _ in range(K):
        powers.append(product_monoid(powers[-1], A) if len(powers) > 1 else A)
    outer_nerve = _nerve_set(A, K)
    levels = [nerve_segal_object(P, L, inner) for P in powers]

    def entrywise(p_from, p_to, q, f):
        base_from, base_to = q0 ** p_from, q0 ** p_to
        dig = _digits(np.arange(base_from ** q), base_from, q)
        return _number([np.asarray(f)[d] for d in dig], base_to) if q else np.zeros(1, dtype=np.int64)

    def outer_map(p_from, p_to, f):
        return tuple(_constant_map(levels[p_from].levels[q], levels[p_to].levels[q], entrywise(p_from, p_to, q, f))
                     for q in range(L + 1))

    faces = tuple(tuple(outer_map(p, p - 1, outer_nerve.faces[p][i]) for i in range(p + 1)) if p else ()
                  for p in range(K + 1))
    degens = tuple(tuple(outer_map(p, p + 1, outer_nerve.degeneracies[p][i]) for i in range(p + 1)) if p < K else ()
                   for p in range(K + 1))
    return DoubleSegalObject(tuple(levels), faces, degens)

