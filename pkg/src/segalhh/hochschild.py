"""Derived bimodule endomorphisms of ``A`` at the level of components.

``Q`` is the diagonal of the bar resolution of ``A``. A map ``Q x Delta[n] -> A``
into the constant bimodule ``A`` sends every simplex to the value of its first
vertex, and vertices ``(p, j)`` with ``p = (u, m, v)`` in ``Q_0`` go to
``u . g_j(m) . v``. So an ``n``-simplex of the mapping space is a tuple of
vertex functions ``(g_0, ..., g_n)``, each ``A -> A``, subject to one equation
per edge of ``Q x Delta[n]``. These are enumerated by constraint propagation.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .bar import bar, lift_through_resolution
from .bimodule import end_is_centre, free_encode, regular
from .errors import BudgetExceeded, CheckFailed, StructuralError, TruncationError
from .monoid import centre
from .simplicial import FinSimplicialSet, checked, pi0, vertex

DEFAULT_NODE_BUDGET = 1_000_000


# ---------------------------------------------------------------- constraint search

def solve_csp(domains, binary, budget):
    """All solutions of a finite CSP, in lexicographic order.

    ``domains`` is a ``(V, D)`` boolean array, ``binary`` a ``(V, V, D, D)``
    boolean array of allowed pairs (all True where unconstrained). Arc
    consistency is enforced first, then backtracking with forward checking.
    Returns ``(solutions, complete, nodes)``.
    """
    dom = domains.copy()
    V = dom.shape[0]
    constrained = ~binary.all(axis=(2, 3))
    np.fill_diagonal(constrained, False)
    queue = [(a, b) for a in range(V) for b in range(V) if constrained[a, b]]
    while queue:
        a, b = queue.pop()
        keep = dom[a] & binary[a, b][:, dom[b]].any(axis=1)
        if not np.array_equal(keep, dom[a]):
            dom[a] = keep
            queue.extend((c, a) for c in range(V) if constrained[c, a] and c != b)
    if not dom.any(axis=1).all():
        return [], True, 0
    solutions, nodes = [], 0
    assign = [0] * V

    def search(k, dom):
        nonlocal nodes
        if k == V:
            solutions.append(tuple(assign))
            return True
        for val in np.flatnonzero(dom[k]).tolist():
            nodes += 1
            if nodes > budget:
                return False
            assign[k] = val
            nxt = dom.copy()
            nxt[k] = False
            nxt[k, val] = True
            rest = constrained[k, k + 1:]
            nxt[k + 1:][rest] &= binary[k, k + 1:][rest][:, val, :]
            if nxt[k + 1:].any(axis=1).all() and not search(k + 1, nxt):
                return False
        return True

    complete = search(0, dom)
    return solutions, complete, nodes


# ---------------------------------------------------------------- mapping space

@dataclass(eq=False)
class MappingSpace:
    Q: object  # BarResolution of A
    target: object  # constant bimodule, regular(A)
    levels: list  # levels[n]: list of tuples (g_0, ..., g_n), each a tuple of values
    complete: bool
    nodes: int
    _index: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        self._index = [{s: i for i, s in enumerate(L)} for L in self.levels]

    @property
    def trunc_degree(self):
        return len(self.levels) - 1

    def index(self, n, element):
        return self._index[n].get(tuple(tuple(int(x) for x in g) for g in element))

    @cached_property
    def simplicial_set(self):
        N = self.trunc_degree
        faces, degens = [()], []
        for n in range(1, N + 1):
            faces.append(tuple(self._structure(n, n - 1, lambda s, i=i: s[:i] + s[i + 1:])
                               for i in range(n + 1)))
        for n in range(N):
            degens.append(tuple(self._structure(n, n + 1, lambda s, i=i: s[:i + 1] + s[i:])
                                for i in range(n + 1)))
        degens.append(())
        return checked(FinSimplicialSet(tuple(len(L) for L in self.levels), tuple(faces), tuple(degens)))

    def _structure(self, n, m, op):
        out = []
        for s in self.levels[n]:
            j = self._index[m].get(op(s))
            if j is None:
                raise StructuralError(f"mapping space not closed under a structure map {n} -> {m}")
            out.append(j)
        return np.asarray(out, dtype=np.int64)

    @cached_property
    def act3(self):
        T = self.target
        return T.right[T.left[:, :, None], np.arange(T.monoid.order)[None, None, :]]

    def materialize(self, k, n):
        """Component on ``Q_n`` of the ``k``-th point of ``Map_0``."""
        g = np.asarray(self.levels[0][k][0])
        Q = self.Q
        p = vertex(Q.diagonal.underlying, n)
        u, m, v = Q.decompose(0, p)
        return self.act3[u, g[m], v]


def _edge_relations(Q, act3):
    """``rel[m1, m2]``: allowed ``(g(m1), g'(m2))`` pairs from edges of ``Q``.

    For every ``x`` in ``Q_1`` with ``d_1 x = (u1, m1, v1)`` and
    ``d_0 x = (u2, m2, v2)`` a map must satisfy ``u1.g(m1).v1 = u2.g'(m2).v2``,
    where ``g``, ``g'`` are the vertex functions at the two ends of the edge.
    """
    nx, D = Q.target.size, act3.shape[1]
    u1, m1, v1 = Q.decompose(0, Q.aug_faces[1][1])
    u2, m2, v2 = Q.decompose(0, Q.aug_faces[1][0])
    rows = np.unique(np.stack([m1, m2, u1, v1, u2, v2], axis=1), axis=0)
    rel = np.ones((nx, nx, D, D), dtype=bool)
    for m1, m2, u1, v1, u2, v2 in rows.tolist():
        rel[m1, m2] &= act3[u1, :, v1][:, None] == act3[u2, :, v2][None, :]
    return rel


def mapping_space(Q, N=None, budget=DEFAULT_NODE_BUDGET):
    """All simplicial bimodule maps ``Q x Delta[n] -> A`` for ``n <= N``."""
    if Q.trunc_degree < 1:
        raise TruncationError("the mapping space needs the bar resolution through degree 1")
    N = Q.trunc_degree if N is None else N
    target = regular(Q.monoid)
    if not (Q.target.size == target.size and np.array_equal(Q.target.left, target.left)
            and np.array_equal(Q.target.right, target.right)):
        raise StructuralError("the resolution must be of A as a bimodule over itself")
    act3 = MappingSpace(Q, target, [[]], True, 0).act3
    rel = _edge_relations(Q, act3)
    nx, D = rel.shape[0], rel.shape[2]
    levels, complete, nodes = [], True, 0
    for n in range(N + 1):
        V = (n + 1) * nx
        domains = np.ones((V, D), dtype=bool)
        binary = np.ones((V, V, D, D), dtype=bool)
        for j in range(n + 1):
            for k in range(j, n + 1):
                for a in range(nx):
                    for b in range(nx):
                        va, vb = j * nx + a, k * nx + b
                        if va == vb:
                            domains[va] &= np.diagonal(rel[a, b])
                        else:
                            binary[va, vb] &= rel[a, b]
                            binary[vb, va] &= rel[a, b].T
        sols, ok, used = solve_csp(domains, binary, budget)
        complete &= ok
        nodes += used
        levels.append([tuple(tuple(s[j * nx:(j + 1) * nx]) for j in range(n + 1)) for s in sols])
    return MappingSpace(Q, target, levels, complete, nodes)


# ---------------------------------------------------------------- products

@dataclass(eq=False)
class HHContext:
    """Shared state for the product computations on one resolution."""
    A: object
    Q: object
    space: MappingSpace
    _lifts: dict = field(default_factory=dict, repr=False)
    _values: dict = field(default_factory=dict, repr=False)

    @cached_property
    def components(self):
        return pi0(self.space.simplicial_set)

    def values(self, k, n):
        key = (k, n)
        if not 0 <= k < len(self.space.levels[0]):
            raise StructuralError(f"no point {k} in Map_0")
        if key not in self._values:
            self._values[key] = self.space.materialize(k, n)
        return self._values[key]

    def lift(self, k):
        if k not in self._lifts:
            self._lifts[k] = lift_through_resolution(self.values(k, 0), self.Q, self.Q)
        return self._lifts[k]

    @cached_property
    def unit(self):
        """Index in ``Map_0`` of the augmentation (``g = id``)."""
        k = self.space.index(0, (tuple(range(self.A.order)),))
        if k is None:
            raise CheckFailed("the augmentation is not a point of the mapping space")
        return k


def context(A, N=3, budget=DEFAULT_NODE_BUDGET, size_budget=None):
    Q = bar(A, regular(A), N) if size_budget is None else bar(A, regular(A), N, size_budget)
    space = mapping_space(Q, N, budget)
    if not space.complete:
        raise BudgetExceeded(f"mapping space search stopped after {space.nodes} nodes", space.nodes)
    return HHContext(A, Q, space)


def composition_product(ctx, f, g):
    """Index in ``Map_0`` of ``g o lift(f)``, after checking it is a simplicial bimodule map."""
    Q, F = ctx.Q, ctx.lift(f)
    comps = [ctx.values(g, n)[F.components[n]] for n in range(Q.trunc_degree + 1)]
    X = Q.diagonal.underlying
    for n in range(1, Q.trunc_degree + 1):
        if np.any(comps[n] != comps[0][vertex(X, n)]):
            raise CheckFailed(f"composite is not simplicial in degree {n}")
    if np.any(comps[0][Q.aug_faces[1][0]] != comps[0][Q.aug_faces[1][1]]):
        raise CheckFailed("composite is not constant along edges")
    act3 = ctx.space.act3
    u, m, v = Q.decompose(0, np.arange(Q.levels[0].size))
    g_new = comps[0][Q.levels[0].generators]
    if np.any(act3[u, g_new[m], v] != comps[0]):
        raise CheckFailed("composite is not equivariant")
    k = ctx.space.index(0, (tuple(g_new),))
    if k is None:
        raise CheckFailed("composite is not a point of the mapping space")
    return k


def tensor_generators(Q, n):
    """Generators ``(x, a, y)`` of ``Q_n (x)_A Q_n`` as ``[(e, x, a) (x) (e, y, e)]`` pairs.

    By the free tensor isomorphism ``F(X) (x)_A F(Y) = F(X x A x Y)`` these
    generate the tensor freely; returned as the two factor indices in ``Q_n``
    and the middle letter.
    """
    A = Q.monoid
    q, e = A.order, A.identity
    nx = Q.levels[n].generators.size
    x, a, y = np.unravel_index(np.arange(nx * q * nx), (nx, q, nx))
    return free_encode(q, nx, e, x, a), Q.levels[n].generators[y], free_encode(q, nx, a, y, e), \
        Q.levels[n].generators[x]


def tensor_product_pi0(ctx, f, g, levels=(0, 1)):
    """Component of ``f (*) g``, transferred along ``w: Q (x)_A Q -> Q``.

    ``w [p (x) q] = p . eps(q)`` is a weak equivalence over ``A``, so the class
    of ``(f (x) g) o c`` for a comparison ``c`` back into the tensor is the
    class of any ``phi`` with ``phi o w = f (x) g``. Such ``phi`` are searched
    for in ``Map_0``, checked on the free generators of the tensor in degrees 0
    and 1, and must all lie in a single component.
    """
    A, Q = ctx.A, ctx.Q
    t = A.table
    matches = None
    for n in levels:
        left_ea, right_ey, right_ay, left_ex = tensor_generators(Q, n)
        fv, gv = ctx.values(f, n), ctx.values(g, n)
        value = t[fv[left_ea], gv[right_ey]]
        if np.any(value != t[fv[left_ex], gv[right_ay]]):
            raise CheckFailed("f (x) g is not balanced over A")
        eps = Q.augmentation[vertex(Q.diagonal.underlying, n)]
        w = Q.levels[n].right[left_ea, eps[right_ey]]
        hits = {k for k in range(len(ctx.space.levels[0])) if np.array_equal(ctx.values(k, n)[w], value)}
        matches = hits if matches is None else matches & hits
    if not matches:
        raise CheckFailed("no point of the mapping space transfers f (x) g")
    classes = {int(ctx.components.labels[k]) for k in matches}
    if len(classes) != 1:
        raise CheckFailed("transferred tensor product is not well defined on components", sorted(classes))
    return classes.pop()


# ---------------------------------------------------------------- pi0 and reports

def _table_checks(table, unit):
    T = np.asarray(table)
    n = T.shape[0]
    r = np.arange(n)
    return {
        "associative": bool(np.all(T[T[:, :, None], r[None, None, :]] == T[r[:, None, None], T[None, :, :]])),
        "unital": bool(np.all(T[unit] == r) and np.all(T[:, unit] == r)),
        "commutative": bool(np.all(T == T.T)),
    }


@dataclass
class HHPi0:
    monoid: object
    trunc_degree: int
    sizes: list  # |Map_n|
    count: int
    representatives: list  # least Map_0 index per component
    unit: int
    compose_table: list
    tensor_table: list
    checks: dict
    context: object = field(repr=False, default=None)

    @property
    def ok(self):
        return all(self.checks.values())

    def assert_invariants(self):
        bad = [k for k, v in self.checks.items() if not v]
        if bad:
            raise CheckFailed("pi0 HH invariants fail", bad)
        return self

    def to_dict(self):
        return {"count": self.count, "mapping_space_sizes": self.sizes, "unit": self.unit,
                "compose_table": self.compose_table, "tensor_table": self.tensor_table,
                "checks": self.checks}


def _class_table(ctx, product):
    members = ctx.components.components()
    count = len(members)
    table = [[None] * count for _ in range(count)]
    consistent = True
    for i in range(count):
        for j in range(count):
            seen = set()
            for f in members[i]:
                for g in members[j]:
                    seen.add(product(f, g))
            if len(seen) != 1:
                consistent = False
            table[i][j] = min(seen)
    return table, consistent


def hh_pi0(A, N=3, budget=DEFAULT_NODE_BUDGET, size_budget=None):
    """Components of the derived endomorphisms of ``A`` with both products."""
    ctx = context(A, N, budget, size_budget)
    labels = ctx.components.labels
    comp, comp_ok = _class_table(ctx, lambda f, g: int(labels[composition_product(ctx, g, f)]))
    tens, tens_ok = _class_table(ctx, lambda f, g: tensor_product_pi0(ctx, f, g))
    unit = int(labels[ctx.unit])
    checks = {"composition_well_defined": comp_ok, "tensor_well_defined": tens_ok}
    for name, table in (("composition", comp), ("tensor", tens)):
        for k, v in _table_checks(table, unit).items():
            checks[f"{name}_{k}"] = v
    checks["tables_equal"] = comp == tens
    reps = [int(min(m)) for m in ctx.components.components()]
    return HHPi0(A, N, [len(L) for L in ctx.space.levels], len(reps), reps, unit, comp, tens, checks, ctx)


@dataclass
class CentreComparison:
    ok: bool
    evaluation: list  # evaluation[class] = element of A
    centre: list
    checks: dict
    counterexample: object = None
    extra: dict = field(default_factory=dict, repr=False)

    def to_dict(self):
        return {"ok": self.ok, "evaluation": self.evaluation, "centre": self.centre,
                "checks": self.checks, "counterexample": self.counterexample}


def evaluate(ctx, k):
    """``phi(e, e, e)`` for the ``k``-th point of ``Map_0``."""
    A, Q = ctx.A, ctx.Q
    e = A.identity
    return int(ctx.values(k, 0)[free_encode(A.order, Q.target.size, e, e, e)])


def centre_comparison(A, N=3, budget=DEFAULT_NODE_BUDGET, hh=None):
    hh = hh_pi0(A, N, budget) if hh is None else hh
    ctx = hh.context
    t = A.table
    members = ctx.components.components()
    values = [sorted({evaluate(ctx, k) for k in m}) for m in members]
    Z = list(centre(A).elements)
    pointwise = [k for k in range(len(ctx.space.levels[0]))
                 if not np.array_equal(t[evaluate(ctx, k)], t[:, evaluate(ctx, k)])]
    ev = [v[0] for v in values]
    checks = {
        "evaluation_well_defined": all(len(v) == 1 for v in values),
        "lands_in_centre": not pointwise,
        "injective": len(set(ev)) == len(ev),
        "image_is_centre": sorted(ev) == Z,
    }
    counter = None
    for name, table in (("composition", hh.compose_table), ("tensor", hh.tensor_table)):
        bad = [(i, j) for i in range(hh.count) for j in range(hh.count)
               if ev[table[i][j]] != t[ev[i], ev[j]]]
        checks[f"{name}_is_multiplication"] = not bad
        if bad and counter is None:
            i, j = bad[0]
            counter = {"product": name, "classes": [i, j], "got": ev[table[i][j]], "expected": int(t[ev[i], ev[j]])}
    if pointwise and counter is None:
        counter = {"not_central": pointwise[0]}
    return CentreComparison(all(checks.values()), ev, Z, checks, counter,
                            {"compose_table": hh.compose_table, "tensor_table": hh.tensor_table})


@dataclass
class EckmannHiltonReport:
    ok: bool
    tables_equal: bool
    commutative: bool
    compose_table: list
    tensor_table: list

    def to_dict(self):
        return {"ok": self.ok, "tables_equal": self.tables_equal, "commutative": self.commutative,
                "compose_table": self.compose_table, "tensor_table": self.tensor_table}


def eckmann_hilton_report(A, N=3, budget=DEFAULT_NODE_BUDGET, hh=None):
    hh = hh_pi0(A, N, budget) if hh is None else hh
    equal = hh.compose_table == hh.tensor_table
    comm = hh.checks["composition_commutative"] and hh.checks["tensor_commutative"]
    return EckmannHiltonReport(equal and comm, equal, comm, hh.compose_table, hh.tensor_table)


@dataclass
class CrossCheck:
    ok: bool
    direct: dict
    derived: dict
    reasons: list

    def to_dict(self):
        return {"ok": self.ok, "direct": self.direct, "derived": self.derived, "reasons": self.reasons}


def _transported(evaluation, table):
    """Multiplication on elements of ``A`` read off a table on indices."""
    out = {}
    for i, a in enumerate(evaluation):
        for j, b in enumerate(evaluation):
            k = table[i][j]
            out[f"{a}*{b}"] = None if k is None else evaluation[k]
    return out


def cross_check(A, N=3, budget=DEFAULT_NODE_BUDGET):
    """Compare direct hom enumeration with the resolution pipeline.

    The two paths share nothing beyond the monoid table. Each yields a set of
    elements of ``A`` (by evaluation at the identity) and a product on it; the
    two must agree exactly, and each must agree with the centre.
    """
    direct = end_is_centre(A, budget)
    comp = centre_comparison(A, N, budget)
    hh_table = comp.extra["compose_table"]
    d = _transported(direct.evaluation, direct.composition_table)
    r = _transported(comp.evaluation, hh_table)
    reasons = []
    if not direct.ok:
        reasons.append("direct enumeration does not match the centre")
    if not comp.ok:
        reasons.append("resolution pipeline does not match the centre")
    if sorted(direct.evaluation) != sorted(comp.evaluation):
        reasons.append("the two paths reach different elements of A")
    elif d != r:
        reasons.append("the two paths disagree on products")
    return CrossCheck(not reasons, {"evaluation": direct.evaluation, "products": d},
                      {"evaluation": comp.evaluation, "products": r}, reasons)
