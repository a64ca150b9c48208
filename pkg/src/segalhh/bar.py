"""The comonadic bar resolution of a bimodule and comparison lifts into it.

Conventions (fixed, and locked by golden tests). ``P_{-1} = M`` and
``P_n = F(U P_{n-1}) = A x P_{n-1} x A``; an element of ``P_n`` is a nested
triple ``(u, x, v)`` with ``x`` in ``P_{n-1}``, stored with the free-bimodule
index ``(u * |P_{n-1}| + x) * |A| + v``.

* ``d_0`` is the counit on the outermost layer: ``(u, x, v) -> u.x.v``.
* ``d_{i+1}(u, x, v) = (u, d_i x, v)``; on ``P_0`` the only face is the
  augmentation ``(u, m, v) -> u.m.v``, so ``d_n`` on ``P_n`` bottoms out there.
* ``s_0(u, x, v) = (u, (e, x, e), v)`` and ``s_{i+1}(u, x, v) = (u, s_i x, v)``.
* The contraction ``h_n: P_n -> P_{n+1}`` is ``x -> (e, x, e)`` (with
  ``h_{-1}: M -> P_0``). It is a map of underlying sets, not of bimodules, and
  satisfies ``d_0 h = id``, ``d_{i+1} h = h d_i``, ``s_0 h = h h`` and
  ``s_{i+1} h = h s_i``.

Worked example, ``A = C2``, ``M = A``: the element ``(1, (0, 1, 1), 0)`` of
``P_1`` has ``d_0 = (1, 1, 1)`` (outer letters multiplied in), and
``d_1 = (1, 0*1*1, 0) = (1, 0, 0)``.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .bimodule import (BimoduleMap, SimplicialBimodule, free_bimodule, free_decode, free_encode,
                       regular)
from .chains import homology_equivalent
from .errors import BudgetExceeded, CheckFailed, StructuralError, TruncationError, Unsupported
from .simplicial import constant, simplicial_map, vertex

DEFAULT_SIZE_BUDGET = 2_000_000


@dataclass(frozen=True, eq=False)
class BarResolution:
    monoid: object
    target: object  # the resolved bimodule M
    levels: tuple  # P_0..P_N, free bimodules
    aug_faces: tuple  # aug_faces[n][i]: P_n -> P_{n-1}, with P_{-1} = M
    degeneracies: tuple
    contraction: tuple  # contraction[n + 1] = h_n: P_n -> P_{n+1}, n = -1..N-1

    @property
    def trunc_degree(self):
        return len(self.levels) - 1

    @property
    def augmentation(self):
        return self.aug_faces[0][0]

    @property
    def faces(self):
        """Faces of the unaugmented object (``faces[0] == ()``)."""
        return ((),) + tuple(self.aug_faces[1:])

    def sizes(self):
        return [L.size for L in self.levels]

    def decompose(self, n, index):
        """``(u, x, v)`` with ``x`` in ``P_{n-1}`` (or ``M`` for ``n = 0``)."""
        inner = self.levels[n - 1].size if n else self.target.size
        return free_decode(self.monoid.order, inner, np.asarray(index))

    def generator(self, n, inner):
        """Index of ``(e, x, e)`` in ``P_n`` for ``x`` in ``P_{n-1}``."""
        return self.levels[n].generators[inner]

    @cached_property
    def diagonal(self):
        return SimplicialBimodule(tuple(self.levels), self.faces, self.degeneracies)

    def vertex_augmentation(self, n):
        """``P_n -> M``: augmentation of the 0-th vertex."""
        return self.augmentation[vertex(self.diagonal.underlying, n)]


def bar(A, M=None, N=2, budget=DEFAULT_SIZE_BUDGET):
    """Bar resolution of ``M`` (default: ``A`` itself) truncated at ``N``."""
    M = regular(A) if M is None else M
    if not M.monoid.same_table(A):
        raise StructuralError("bimodule is over a different monoid")
    q = A.order
    required = sum(q ** (2 * n + 2) * M.size for n in range(N + 1))
    if required > budget:
        raise BudgetExceeded(f"bar resolution needs {required} elements, budget is {budget}", required)
    levels, aug_faces, degens = [], [], []
    prev = M
    for n in range(N + 1):
        P = free_bimodule(A, prev.size)
        u, x, v = free_decode(q, prev.size, np.arange(P.size))
        fs = [prev.right[prev.left[u, x], v]]
        for i in range(n):
            inner = aug_faces[n - 1][i]
            fs.append(free_encode(q, levels[n - 2].size if n >= 2 else M.size, u, inner[x], v))
        levels.append(P)
        aug_faces.append(tuple(fs))
        prev = P
    for n in range(N):
        P = levels[n]
        inner_size = levels[n - 1].size if n else M.size
        u, x, v = free_decode(q, inner_size, np.arange(P.size))
        ds = [free_encode(q, P.size, u, P.generators[x], v)]
        for i in range(n):
            ds.append(free_encode(q, P.size, u, degens[n - 1][i][x], v))
        degens.append(tuple(ds))
    degens.append(())
    contraction = (levels[0].generators,) + tuple(levels[n + 1].generators for n in range(N))
    R = BarResolution(A, M, tuple(levels), tuple(aug_faces), tuple(degens), contraction)
    bad = structure_violations(R)
    if bad:
        raise CheckFailed("bar resolution failed its own checks", bad)
    return R


def structure_violations(R):
    """Simplicial identities, equivariance, augmentation, freeness, and contraction."""
    out = list(R.diagonal.violations())
    try:
        R.diagonal.underlying
    except CheckFailed as exc:
        out.append({"simplicial identities": exc.witness})
    if BimoduleMap(R.levels[0], R.target, R.augmentation).violations():
        out.append("augmentation is not equivariant")
    if R.trunc_degree >= 1 and np.any(R.augmentation[R.aug_faces[1][0]] != R.augmentation[R.aug_faces[1][1]]):
        out.append("eps d_0 != eps d_1")
    q = R.monoid.order
    for n, P in enumerate(R.levels):
        if P.size != q * q * (R.levels[n - 1].size if n else R.target.size):
            out.append(f"|P_{n}| is not |A|^2 |P_{n - 1}|")
        u, x, v = free_decode(q, P.generators.size, np.arange(P.size))
        if np.any(P.right[P.left[u, P.generators[x]], v] != np.arange(P.size)):
            out.append(f"generator section of P_{n} does not split the free structure")
    out += contraction_violations(R, R.contraction)
    return out


def contraction_violations(R, h):
    """Check ``d_0 h = id``, ``d_{i+1} h = h d_i``, ``s_0 h = h h``, ``s_{i+1} h = h s_i``."""
    out = []
    N = R.trunc_degree
    d, s = R.aug_faces, R.degeneracies
    for n in range(-1, N):
        hn = h[n + 1]
        src = R.levels[n].size if n >= 0 else R.target.size
        if np.any(d[n + 1][0][hn] != np.arange(src)):
            out.append({"identity": "d_0 h = id", "level": n})
        for i in range(n + 1):
            lhs = d[n + 1][i + 1][hn]
            rhs = h[n][d[n][i]]
            if np.any(lhs != rhs):
                out.append({"identity": f"d_{i + 1} h = h d_{i}", "level": n,
                            "simplex": int(np.flatnonzero(lhs != rhs)[0])})
        if 0 <= n and n + 1 < N:
            if np.any(s[n + 1][0][hn] != h[n + 2][hn]):
                out.append({"identity": "s_0 h = h h", "level": n})
            for i in range(n + 1):
                if np.any(s[n + 1][i + 1][hn] != h[n + 2][s[n][i]]):
                    out.append({"identity": f"s_{i + 1} h = h s_{i}", "level": n})
    return out


def twisted_contraction(R, a, b):
    """Alternative contraction ``x -> (a, a^-1 . x . b^-1, b)`` for invertible ``a``, ``b``."""
    A = R.monoid
    t, e = A.table, A.identity
    inv = {}
    for g in (a, b):
        hits = [y for y in range(A.order) if t[g, y] == e and t[y, g] == e]
        if not hits:
            raise StructuralError(f"element {g} is not invertible")
        inv[g] = hits[0]
    q = A.order
    out = []
    for n in range(-1, R.trunc_degree):
        src = R.levels[n] if n >= 0 else R.target
        inner = src.right[src.left[inv[a]], inv[b]]
        out.append(free_encode(q, src.size, a, inner, b))
    return tuple(out)


# ---------------------------------------------------------------- diagonal and augmentation

@dataclass(frozen=True, eq=False)
class Diagonal:
    bimodule: SimplicialBimodule
    augmentation: object  # SimplicialMap diag P -> constant M

    @property
    def simplicial_set(self):
        return self.bimodule.underlying


def diagonal(P):
    """``hocolim P_n`` realised as the diagonal; with discrete ``A`` and ``M`` its ``n``-simplices are ``P_n``."""
    if not isinstance(P, BarResolution):
        raise Unsupported("diagonal is only built for bar resolutions over a discrete monoid")
    X = P.diagonal.underlying
    N = P.trunc_degree
    aug = simplicial_map(X, constant(P.target.size, N), [P.vertex_augmentation(n) for n in range(N + 1)])
    return Diagonal(P.diagonal, aug)


@dataclass
class AugmentationReport:
    equivalent: bool
    contraction_ok: bool
    contraction_violations: list
    homology: dict

    def to_dict(self):
        return {"equivalent": self.equivalent, "contraction_ok": self.contraction_ok,
                "contraction_violations": self.contraction_violations, "homology": self.homology}


def augmentation_equivalence(P, up_to=None):
    """Surrogate check on ``diag P -> M`` plus the exact contraction identities."""
    up_to = P.trunc_degree - 1 if up_to is None else up_to
    eq = homology_equivalent(diagonal(P).augmentation, up_to)
    bad = contraction_violations(P, P.contraction)
    return AugmentationReport(eq.equivalent and not bad, not bad, bad, eq.to_dict())


# ---------------------------------------------------------------- lifting

@dataclass(frozen=True, eq=False)
class Lift:
    source: BarResolution
    target: BarResolution
    components: tuple  # components[n]: Q_n -> R_n


def lift_through_resolution(f0, Q, R, contraction=None, check=True):
    """Lift ``f: diag Q -> M`` (given by its degree-0 component) to ``diag Q -> diag R``.

    On a generator ``(e, y, e)`` of ``Q_n`` the lift is ``h(lift(y))``, where
    ``y = d_0 (e, y, e)`` was lifted in the previous degree; elsewhere it is
    extended equivariantly. The result is checked to be a simplicial bimodule
    map covering ``f``.
    """
    if not isinstance(Q, BarResolution):
        raise Unsupported("lifting needs a levelwise free source with generator sections")
    N = Q.trunc_degree
    if R.trunc_degree < N:
        raise TruncationError(f"target resolution is truncated at {R.trunc_degree}, need {N}")
    h = R.contraction if contraction is None else contraction
    f0 = np.asarray(f0, dtype=np.int64)
    q = Q.monoid.order
    comps = []
    for n in range(N + 1):
        P = Q.levels[n]
        inner = Q.levels[n - 1].size if n else Q.target.size
        u, y, v = free_decode(q, inner, np.arange(P.size))
        if n == 0:
            gen_values = h[0][f0[P.generators]]
        else:
            gen_values = h[n][comps[n - 1]]
        Rn = R.levels[n]
        comps.append(Rn.right[Rn.left[u, gen_values[y]], v])
    lift = Lift(Q, R, tuple(comps))
    if check:
        bad = lift_violations(lift, f0)
        if bad:
            raise CheckFailed("lift is not a simplicial bimodule map over f", bad)
    return lift


def lift_violations(lift, f0):
    Q, R, F = lift.source, lift.target, lift.components
    out = []
    if np.any(R.augmentation[F[0]] != f0):
        out.append("does not cover f after augmentation")
    for n in range(Q.trunc_degree + 1):
        if BimoduleMap(Q.levels[n], R.levels[n], F[n]).violations():
            out.append(f"level {n} not equivariant")
        for i in range(n + 1 if n else 0):
            if np.any(F[n - 1][Q.aug_faces[n][i]] != R.aug_faces[n][i][F[n]]):
                out.append(f"does not commute with d_{i} on level {n}")
        for i, sd in enumerate(Q.degeneracies[n]):
            if np.any(F[n + 1][sd] != R.degeneracies[n][i][F[n]]):
                out.append(f"does not commute with s_{i} on level {n}")
    return out


def find_homotopy(F1, F2):
    """Search the truncation-1 mapping space for a 1-simplex from ``F1`` to ``F2``.

    A homotopy ``Q x Delta[1] -> R`` is fixed on the two ends; on the
    nondegenerate edge it is equivariant, hence determined by its values on the
    generators ``(e, y, e)`` of ``Q_1``, each constrained by its two faces. Returns
    the generator values (``None`` if some generator has no admissible value).
    """
    Q, R = F1.source, F1.target
    if Q.trunc_degree < 1:
        raise TruncationError("homotopies need degree 1")
    gens = Q.levels[1].generators
    d0_targets = F2.components[0][Q.aug_faces[1][0][gens]]
    d1_targets = F1.components[0][Q.aug_faces[1][1][gens]]
    d0, d1 = R.aug_faces[1][0], R.aug_faces[1][1]
    values = []
    for t0, t1 in zip(d0_targets.tolist(), d1_targets.tolist()):
        hits = np.flatnonzero((d0 == t0) & (d1 == t1))
        if hits.size == 0:
            return None
        values.append(int(hits[0]))
    return np.asarray(values)
