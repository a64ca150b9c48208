"""Bimodules over a finite monoid: free bimodules, tensor products, hom-sets.

A bimodule over ``A`` is a finite indexed set with action tables
``left[a, m] = a.m`` and ``right[m, b] = m.b``.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .chains import homology_equivalent
from .errors import BudgetExceeded, CheckFailed, StructuralError, TruncationError
from .monoid import centre
from .quotient import coequalize, representatives
from .simplicial import FinSimplicialSet, checked, constant, simplicial_map, vertex


def _table(arr, shape):
    arr = np.array(arr, dtype=np.int64)
    if -1 not in shape and arr.size != int(np.prod(shape)):
        raise StructuralError(f"action table has {arr.size} entries, expected shape {shape}")
    arr = arr.reshape(shape)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Bimodule:
    monoid: object
    size: int
    left: np.ndarray
    right: np.ndarray
    generators: object = None  # free bimodules: index of (e, x, e) for each basis element x

    def __post_init__(self):
        q = self.monoid.order
        object.__setattr__(self, "size", int(self.size))
        object.__setattr__(self, "left", _table(self.left, (q, self.size)))
        object.__setattr__(self, "right", _table(self.right, (self.size, q)))
        for name, t in (("left", self.left), ("right", self.right)):
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise StructuralError(f"{name} action leaves the carrier")
        if self.generators is not None:
            object.__setattr__(self, "generators", _table(self.generators, (-1,)))

    def act(self, a, m, b):
        return int(self.right[self.left[a, m], b])

    def violations(self):
        """Unit, associativity, and commuting-actions failures, one witness each."""
        A, L, R = self.monoid, self.left, self.right
        e, t, out = A.identity, A.table, []
        ms = np.arange(self.size)
        if np.any(L[e] != ms):
            out.append({"law": "left unit", "element": int(np.flatnonzero(L[e] != ms)[0])})
        if np.any(R[:, e] != ms):
            out.append({"law": "right unit", "element": int(np.flatnonzero(R[:, e] != ms)[0])})
        qa = np.arange(A.order)
        # (ab).m == a.(b.m)
        bad = np.argwhere(L[t] != L[qa[:, None, None], L[None, :, :]])
        if bad.size:
            out.append({"law": "left associativity", "witness": bad[0].tolist()})
        # m.(ab) == (m.a).b
        bad = np.argwhere(R[:, t] != R[R])
        if bad.size:
            out.append({"law": "right associativity", "witness": bad[0].tolist()})
        # (a.m).b == a.(m.b)
        bad = np.argwhere(R[L] != L[:, R])
        if bad.size:
            out.append({"law": "actions commute", "witness": bad[0].tolist()})
        return out


def bimodule(A, left, right, generators=None):
    M = Bimodule(A, len(right), left, right, generators)
    bad = M.violations()
    if bad:
        raise CheckFailed("bimodule axioms violated", bad)
    return M


def regular(A):
    """``A`` as a bimodule over itself."""
    return bimodule(A, A.table, A.table)


def one_point(A):
    return bimodule(A, np.zeros((A.order, 1)), np.zeros((1, A.order)))


@dataclass(frozen=True, eq=False)
class BimoduleMap:
    source: Bimodule
    target: Bimodule
    mapping: np.ndarray

    def violations(self):
        f = np.asarray(self.mapping)
        S, T = self.source, self.target
        out = []
        bad = np.argwhere(f[S.left] != T.left[:, f])
        if bad.size:
            out.append({"law": "left equivariance", "witness": bad[0].tolist()})
        bad = np.argwhere(f[S.right] != T.right[f])
        if bad.size:
            out.append({"law": "right equivariance", "witness": bad[0].tolist()})
        return out


# ---------------------------------------------------------------- free bimodules

def free_encode(q, nx, u, x, v):
    return (u * nx + x) * q + v


def free_decode(q, nx, index):
    ux, v = np.divmod(index, q)
    u, x = np.divmod(ux, nx) if nx else (ux, ux)
    return u, x, v


def free_bimodule(A, nx):
    """``F(X) = A x X x A`` with ``a.(u, x, v).b = (au, x, vb)``.

    The element ``(u, x, v)`` has index ``(u * |X| + x) * |A| + v``; the unit
    insertion ``x -> (e, x, e)`` is recorded as ``generators``.
    """
    q, t, e = A.order, A.table, A.identity
    size = q * nx * q
    u, x, v = free_decode(q, nx, np.arange(size))
    left = free_encode(q, nx, t[:, u], x[None, :], v[None, :])
    right = free_encode(q, nx, u[:, None], x[:, None], t[v][:, :])
    gens = free_encode(q, nx, e, np.arange(nx), e)
    return bimodule(A, left.reshape(q, size), right.reshape(size, q), gens)


def extend_from_generators(F, target, values):
    """The unique bimodule map ``F(X) -> target`` sending ``(e, x, e)`` to ``values[x]``."""
    q = F.monoid.order
    nx = F.size // (q * q)
    u, x, v = free_decode(q, nx, np.arange(F.size))
    values = np.asarray(values, dtype=np.int64)
    return BimoduleMap(F, target, target.right[target.left[u, values[x]], v])


# ---------------------------------------------------------------- tensor product

@dataclass(frozen=True, eq=False)
class Tensor:
    bimodule: Bimodule
    labels: np.ndarray  # class of the pair (m, n), pair index m * |N| + n
    left_factor: Bimodule
    right_factor: Bimodule

    def cls(self, m, n):
        return self.labels[np.asarray(m) * self.right_factor.size + np.asarray(n)]


def tensor_over_A(M, N):
    """``M (x)_A N``: the coequalizer of ``M x A x N`` into ``M x N``.

    The relation ``(m.a, n) ~ (m, a.n)`` is closed under the outer actions and
    the resulting congruence is re-saturated until both actions are well defined
    on classes. Classes are labelled by their least pair index.
    """
    if M.monoid is not N.monoid and not M.monoid.same_table(N.monoid):
        raise StructuralError("tensor factors live over different monoids")
    A = M.monoid
    nm, nn = M.size, N.size
    total = nm * nn
    m, n = np.divmod(np.arange(total), nn) if nn else (np.zeros(0, int),) * 2
    lhs = (M.right[m][:, :] * nn + n[:, None]).ravel()  # (m.a, n)
    rhs = (m[:, None] * nn + N.left[:, n].T).ravel()  # (m, a.n)
    labels = coequalize(total, lhs, rhs)
    moves = [M.left[:, m] * nn + n[None, :], (m[:, None] * nn + N.right[n]).T]
    extra_l, extra_r = [], []
    while True:
        reps = representatives(labels)
        rep_of = reps[labels]
        added = False
        for move in moves:
            for img in move:
                a_img, b_img = labels[img], labels[img[rep_of]]
                bad = a_img != b_img
                if np.any(bad):
                    extra_l.append(img[bad])
                    extra_r.append(img[rep_of][bad])
                    added = True
        if not added:
            break
        labels = coequalize(total, np.concatenate([lhs, *extra_l]), np.concatenate([rhs, *extra_r]))
    reps = representatives(labels)
    rm, rn = np.divmod(reps, nn) if nn else (reps, reps)
    k = reps.size
    left = labels[M.left[:, rm] * nn + rn[None, :]]
    right = labels[(rm[:, None] * nn + N.right[rn])]
    T = Bimodule(A, k, left, right)
    bad = T.violations()
    if bad:
        raise CheckFailed("tensor product is not a bimodule (internal error)", bad)
    return Tensor(T, labels, M, N)


@dataclass
class IsoReport:
    ok: bool
    size: int
    expected_size: int
    witness: object = None

    def to_dict(self):
        return {"ok": self.ok, "size": self.size, "expected_size": self.expected_size, "witness": self.witness}


def check_free_tensor_iso(A, nx, ny):
    """Verify ``F(X) (x)_A F(Y) -> F(X x A x Y)``, ``(u,x,v)(x)(w,y,z) -> (u,(x,vw,y),z)``.

    The map is computed on every pair, checked constant on tensor classes,
    bijective, and equivariant.
    """
    q, t = A.order, A.table
    FX, FY = free_bimodule(A, nx), free_bimodule(A, ny)
    T = tensor_over_A(FX, FY)
    nb = nx * q * ny
    F = free_bimodule(A, nb)
    pairs = np.arange(FX.size * FY.size)
    p, r = np.divmod(pairs, FY.size) if FY.size else (pairs, pairs)
    u, x, v = free_decode(q, nx, p)
    w, y, z = free_decode(q, ny, r)
    basis = (x * q + t[v, w]) * ny + y
    image = free_encode(q, nb, u, basis, z)
    k = T.bimodule.size
    reps = representatives(T.labels)
    on_classes = image[reps] if k else np.zeros(0, dtype=np.int64)
    report = IsoReport(True, k, F.size)
    if k and np.any(on_classes[T.labels] != image):
        bad = int(np.flatnonzero(on_classes[T.labels] != image)[0])
        report.ok, report.witness = False, {"not well defined at pair": bad}
    elif np.unique(on_classes).size != F.size or k != F.size:
        report.ok, report.witness = False, {"classes": k, "image_size": int(np.unique(on_classes).size)}
    else:
        bad = BimoduleMap(T.bimodule, F, on_classes).violations()
        if bad:
            report.ok, report.witness = False, bad
    return report


def unit_iso_left(M):
    """Bijection ``A (x)_A M -> M``, ``[a (x) m] -> a.m``, checked on classes."""
    T = tensor_over_A(regular(M.monoid), M)
    a, m = np.divmod(np.arange(M.monoid.order * M.size), M.size)
    return _unit_iso(T, M, M.left[a, m])


def unit_iso_right(M):
    """Bijection ``M (x)_A A -> M``, ``[m (x) a] -> m.a``."""
    q = M.monoid.order
    T = tensor_over_A(M, regular(M.monoid))
    m, a = np.divmod(np.arange(M.size * q), q)
    return _unit_iso(T, M, M.right[m, a])


def _unit_iso(T, M, image):
    reps = representatives(T.labels)
    on_classes = image[reps]
    ok = bool(np.all(on_classes[T.labels] == image)) and np.unique(on_classes).size == M.size \
        and T.bimodule.size == M.size and not BimoduleMap(T.bimodule, M, on_classes).violations()
    return IsoReport(ok, T.bimodule.size, M.size)


# ---------------------------------------------------------------- hom enumeration

@dataclass
class HomEnumeration:
    maps: list
    complete: bool
    nodes: int


def enumerate_bimodule_maps(M, N, budget=1_000_000):
    """All bimodule maps ``M -> N``, by orbit-wise constraint propagation.

    The least unassigned element ``m`` is sent to each ``t`` in turn; the
    assignment is propagated to the whole orbit ``a.m.b -> a.t.b`` and rejected
    on the first conflict. Maps are returned in lexicographic order of their
    value tables. If more than ``budget`` candidate images are tried the result
    is marked incomplete.
    """
    if not M.monoid.same_table(N.monoid):
        raise StructuralError("hom between bimodules over different monoids")
    orbit = [M.right[M.left[:, m]] for m in range(M.size)]  # orbit[m][a, b] = a.m.b
    found, nodes = [], 0
    f = np.full(M.size, -1, dtype=np.int64)

    def search():
        nonlocal nodes
        free = np.flatnonzero(f < 0)
        if free.size == 0:
            found.append(f.copy())
            return True
        m = int(free[0])
        elems = orbit[m]
        for t in range(N.size):
            nodes += 1
            if nodes > budget:
                return False
            values = N.right[N.left[:, t]]  # values[a, b] = a.t.b
            current = f[elems]
            if np.any((current >= 0) & (current != values)):
                continue
            # the same element reached by different (a, b) must get one value
            flat_e, flat_v = elems.ravel(), values.ravel()
            order = np.argsort(flat_e, kind="stable")
            se, sv = flat_e[order], flat_v[order]
            same = se[1:] == se[:-1]
            if np.any(same & (sv[1:] != sv[:-1])):
                continue
            saved = f.copy()
            f[flat_e] = flat_v
            if not search():
                return False
            f[:] = saved
        return True

    complete = search()
    return HomEnumeration(found, bool(complete), nodes)


@dataclass
class EndCentreReport:
    ok: bool
    hom_count: int
    centre: list
    evaluation: list  # f(e) for each enumerated map
    composition_table: list  # index of f_i o f_j among the maps
    witness: object = None

    def to_dict(self):
        return {"ok": self.ok, "hom_count": self.hom_count, "centre": self.centre,
                "evaluation": self.evaluation, "composition_table": self.composition_table,
                "witness": self.witness}


def end_is_centre(A, budget=1_000_000):
    """``Hom(A, A) -> Z(A)``, ``f -> f(e)``: bijective and carries composition to multiplication."""
    R = regular(A)
    homs = enumerate_bimodule_maps(R, R, budget)
    if not homs.complete:
        raise BudgetExceeded("hom enumeration exceeded its budget", homs.nodes)
    e = A.identity
    ev = [int(f[e]) for f in homs.maps]
    Z = list(centre(A).elements)
    index = {tuple(f.tolist()): k for k, f in enumerate(homs.maps)}
    table, witness = [], None
    for fi in homs.maps:
        row = []
        for fj in homs.maps:
            k = index.get(tuple(fi[fj].tolist()))
            row.append(k)
            if witness is None and (k is None or ev[k] != A.mul(int(fi[e]), int(fj[e]))):
                witness = {"composite_not_matching": [int(fi[e]), int(fj[e])]}
        table.append(row)
    ok = sorted(ev) == Z and len(set(ev)) == len(ev) and witness is None
    if witness is None and not ok:
        witness = {"evaluation": ev, "centre": Z}
    return EndCentreReport(ok, len(homs.maps), Z, ev, table, witness)


# ---------------------------------------------------------------- simplicial bimodules

@dataclass(frozen=True, eq=False)
class SimplicialBimodule:
    levels: tuple  # Bimodule per degree
    faces: tuple
    degeneracies: tuple

    @property
    def trunc_degree(self):
        return len(self.levels) - 1

    @property
    def monoid(self):
        return self.levels[0].monoid

    @cached_property
    def underlying(self):
        return checked(FinSimplicialSet(tuple(L.size for L in self.levels), self.faces, self.degeneracies))

    def violations(self):
        out = []
        for n, fs in enumerate(self.faces):
            for i, f in enumerate(fs):
                if BimoduleMap(self.levels[n], self.levels[n - 1], f).violations():
                    out.append(f"d_{i} on level {n} is not equivariant")
        for n, ds in enumerate(self.degeneracies):
            for i, s in enumerate(ds):
                if BimoduleMap(self.levels[n], self.levels[n + 1], s).violations():
                    out.append(f"s_{i} on level {n} is not equivariant")
        return out


def constant_bimodule(M, N):
    ident = np.arange(M.size)
    return SimplicialBimodule(
        (M,) * (N + 1),
        tuple(tuple(ident for _ in range(n + 1)) if n else () for n in range(N + 1)),
        tuple(tuple(ident for _ in range(n + 1)) if n < N else () for n in range(N + 1)))


def tensor_with_constant(Z, B):
    """Levelwise ``Z_n (x)_A B`` for a simplicial bimodule ``Z`` and a discrete bimodule ``B``."""
    tensors = [tensor_over_A(L, B) for L in Z.levels]
    N = Z.trunc_degree

    def induced(src, dst, zmap):
        reps = representatives(tensors[src].labels)
        z, b = np.divmod(reps, B.size)
        return tensors[dst].labels[zmap[z] * B.size + b]

    faces = [()] + [tuple(induced(n, n - 1, Z.faces[n][i]) for i in range(n + 1)) for n in range(1, N + 1)]
    degens = [tuple(induced(n, n + 1, Z.degeneracies[n][i]) for i in range(n + 1)) for n in range(N)] + [()]
    return SimplicialBimodule(tuple(t.bimodule for t in tensors), tuple(faces), tuple(degens)), tensors


@dataclass
class UnitAxiomReport:
    equivalent: bool
    up_to: int
    product_iso: bool
    level_sizes: list
    equivalence: dict

    def to_dict(self):
        return {"equivalent": self.equivalent, "up_to": self.up_to, "product_iso": self.product_iso,
                "level_sizes": self.level_sizes, "equivalence": self.equivalence}


def unit_axiom_instance(Z, augmentation, nx, up_to=None):
    """Is ``Z (x)_A F(X) -> A (x)_A F(X) = F(X)`` a homology equivalence through ``up_to``?

    ``Z`` is a simplicial bimodule resolving ``A`` with ``augmentation: Z_0 -> A``.
    The tensor is computed levelwise as a coequalizer, compared against
    ``Z_n x X x A`` through ``[z (x) (u, x, v)] -> (z.u, x, v)``, and mapped to
    ``F(X)`` by ``[z (x) p] -> eps(z).p``.
    """
    A = Z.monoid
    N = Z.trunc_degree
    up_to = N - 1 if up_to is None else up_to
    if up_to > N - 1:
        raise TruncationError(f"degree {up_to} needs truncation at least {up_to + 1}")
    FX = free_bimodule(A, nx)
    T, tensors = tensor_with_constant(Z, FX)
    q = A.order
    product_iso = True
    for n, tn in enumerate(tensors):
        reps = representatives(tn.labels)
        z, p = np.divmod(np.arange(Z.levels[n].size * FX.size), FX.size)
        u, x, v = free_decode(q, nx, p)
        image = (Z.levels[n].right[z, u] * nx + x) * q + v
        target_size = Z.levels[n].size * nx * q
        on_classes = image[reps]
        if (np.any(on_classes[tn.labels] != image) or np.unique(on_classes).size != target_size
                or reps.size != target_size):
            product_iso = False
    eps = np.asarray(augmentation, dtype=np.int64)
    comps = []
    for n in range(N + 1):
        reps = representatives(tensors[n].labels)
        z, p = np.divmod(reps, FX.size)
        z0 = vertex(Z.underlying, n)[z]
        comps.append(FX.left[eps[z0], p])
    f = simplicial_map(T.underlying, constant(FX.size, N), comps)
    eq = homology_equivalent(f, up_to)
    return UnitAxiomReport(eq.equivalent and product_iso, up_to, product_iso,
                           [L.size for L in T.levels], eq.to_dict())
