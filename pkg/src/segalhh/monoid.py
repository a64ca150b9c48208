"""Finite monoids given by multiplication tables, their centres, and their nerves."""
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .errors import CheckFailed, StructuralError
from .simplicial import FinSimplicialSet, checked


@dataclass(frozen=True, eq=False)
class FiniteMonoid:
    table: np.ndarray  # table[a, b] = a * b
    identity: int
    name: str = ""

    def __post_init__(self):
        t = np.array(self.table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise StructuralError("multiplication table must be a non-empty square array")
        if t.min() < 0 or t.max() >= t.shape[0]:
            raise StructuralError("table entries must be element indices")
        if not 0 <= int(self.identity) < t.shape[0]:
            raise StructuralError("identity index out of range")
        t.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "identity", int(self.identity))

    @property
    def order(self):
        return self.table.shape[0]

    def mul(self, a, b):
        return int(self.table[a, b])

    def same_table(self, other):
        return self.identity == other.identity and np.array_equal(self.table, other.table)

    def __repr__(self):
        return f"FiniteMonoid({self.name or 'order'}={self.order})"


def monoid_violations(table, identity, limit=1):
    """Associativity and unit violations, each with a witness."""
    t = np.asarray(table, dtype=np.int64)
    n = t.shape[0]
    out = []
    lhs = t[t[:, :, None], np.arange(n)[None, None, :]]  # (a b) c
    rhs = t[np.arange(n)[:, None, None], t[None, :, :]]  # a (b c)
    bad = np.argwhere(lhs != rhs)
    for a, b, c in bad[:limit].tolist():
        out.append({"law": "associativity", "triple": [a, b, c],
                    "(ab)c": int(lhs[a, b, c]), "a(bc)": int(rhs[a, b, c])})
    e = identity
    for x in range(n):
        if t[e, x] != x or t[x, e] != x:
            out.append({"law": "identity", "element": x, "e*x": int(t[e, x]), "x*e": int(t[x, e])})
            if len(out) >= limit + 1:
                break
    return out


def validate_monoid(table, identity, name=""):
    """Check all ``n^3`` triples and the two-sided identity; raise with a witness on failure."""
    M = FiniteMonoid(table, identity, name)
    bad = monoid_violations(M.table, M.identity)
    if bad:
        raise CheckFailed("not a monoid", bad)
    return M


@dataclass(frozen=True, eq=False)
class MonoidHom:
    source: FiniteMonoid
    target: FiniteMonoid
    mapping: np.ndarray

    def violations(self):
        f = np.asarray(self.mapping)
        out = []
        if f[self.source.identity] != self.target.identity:
            out.append({"law": "identity"})
        lhs = f[self.source.table]
        rhs = self.target.table[f[:, None], f[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            out.append({"law": "multiplication", "pair": bad[0].tolist()})
        return out


@dataclass(frozen=True, eq=False)
class SimplicialMonoid:
    """Levelwise finite monoids with homomorphisms as faces and degeneracies."""
    levels: tuple
    faces: tuple  # faces[n][i]: level n -> level n-1, as element maps
    degeneracies: tuple

    @property
    def trunc_degree(self):
        return len(self.levels) - 1

    def underlying(self):
        return checked(FinSimplicialSet(tuple(M.order for M in self.levels), self.faces, self.degeneracies))

    def violations(self):
        out = []
        for n, fs in enumerate(self.faces):
            for i, f in enumerate(fs):
                if MonoidHom(self.levels[n], self.levels[n - 1], np.asarray(f)).violations():
                    out.append(f"d_{i} on level {n} is not a homomorphism")
        for n, ds in enumerate(self.degeneracies):
            for i, s in enumerate(ds):
                if MonoidHom(self.levels[n], self.levels[n + 1], np.asarray(s)).violations():
                    out.append(f"s_{i} on level {n} is not a homomorphism")
        return out


def constant_simplicial_monoid(M, N):
    ident = np.arange(M.order)
    return SimplicialMonoid(
        (M,) * (N + 1),
        tuple(tuple(ident for _ in range(n + 1)) if n else () for n in range(N + 1)),
        tuple(tuple(ident for _ in range(n + 1)) if n < N else () for n in range(N + 1)),
    )


# ---------------------------------------------------------------- operations

@dataclass(frozen=True)
class Centre:
    elements: tuple
    closed: bool
    contains_identity: bool


def centre(M):
    t = M.table
    central = np.flatnonzero(np.all(t == t.T, axis=1))
    elems = tuple(int(z) for z in central)
    zs = set(elems)
    closed = all(int(t[a, b]) in zs for a in elems for b in elems)
    return Centre(elems, closed, M.identity in zs)


def opposite(M):
    return FiniteMonoid(M.table.T, M.identity, f"{M.name}^op" if M.name else "")


def product_monoid(M, N):
    """Componentwise product; ``(m, n)`` has index ``m * |N| + n``."""
    a = np.arange(M.order * N.order)
    m, n = np.divmod(a, N.order)
    table = M.table[m[:, None], m[None, :]] * N.order + N.table[n[:, None], n[None, :]]
    name = f"{M.name}x{N.name}" if M.name and N.name else ""
    return FiniteMonoid(table, M.identity * N.order + N.identity, name)


def relabel(M, perm):
    """Monoid isomorphic to ``M`` with element ``x`` renamed ``perm[x]``."""
    perm = np.asarray(perm, dtype=np.int64)
    inv = np.argsort(perm)
    table = perm[M.table[inv[:, None], inv[None, :]]]
    return FiniteMonoid(table, int(perm[M.identity]), M.name)


def canonical(M):
    """Relabel so the identity is 0; the other elements keep their relative order.

    Returns the relabelled monoid and the old-to-new index map.
    """
    order = [M.identity] + [x for x in range(M.order) if x != M.identity]
    perm = np.empty(M.order, dtype=np.int64)
    perm[order] = np.arange(M.order)
    return relabel(M, perm), perm


# ---------------------------------------------------------------- catalogue

def trivial():
    return FiniteMonoid([[0]], 0, "1")


def cyclic(n):
    a = np.arange(n)
    return FiniteMonoid((a[:, None] + a[None, :]) % n, 0, f"C{n}")


def symmetric(k):
    """Symmetric group on ``k`` letters; ``p * q`` is ``p`` after ``q``."""
    perms = sorted(permutations(range(k)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(p[q[x]] for x in range(k))] for q in perms] for p in perms]
    return FiniteMonoid(table, index[tuple(range(k))], f"S{k}")


def left_zero_with_identity(k=2):
    """Left-zero semigroup on ``k`` letters (``x * y = x``) with an identity 0 adjoined."""
    n = k + 1
    table = [[y if x == 0 else x for y in range(n)] for x in range(n)]
    return FiniteMonoid(table, 0, f"LZ{k}+1")


def corpus():
    """The test corpus, by name."""
    monoids = [trivial(), cyclic(2), cyclic(3), cyclic(4), product_monoid(cyclic(2), cyclic(2)),
               symmetric(3), left_zero_with_identity(2)]
    return {M.name: M for M in monoids}


# ---------------------------------------------------------------- nerve

def _digits(index, base, k):
    out = []
    for _ in range(k):
        index, r = np.divmod(index, base)
        out.append(r)
    return out[::-1]


def _number(digits, base):
    out = np.zeros_like(digits[0]) if digits else None
    for d in digits:
        out = out * base + d
    return out


def nerve(A, N):
    """Nerve truncated at ``N``: ``X_k = A^k``.

    ``d_0`` and ``d_k`` drop the first and last entry, inner faces multiply
    neighbours, ``s_i`` inserts the identity at position ``i``. Tuples are
    indexed in base ``|A|`` with the first entry most significant. A
    ``SimplicialMonoid`` yields its levelwise nerve as a Segal object.
    """
    if isinstance(A, SimplicialMonoid):
        from .segal import simplicial_monoid_nerve
        return simplicial_monoid_nerve(A, N)
    if N < 1:
        raise StructuralError("nerve needs truncation at least 1")
    return checked(_nerve_set(A, N))


def _nerve_set(A, N):
    q, e, t = A.order, A.identity, A.table
    sizes = tuple(q ** k for k in range(N + 1))
    faces, degens = [()], []
    for k in range(1, N + 1):
        dig = _digits(np.arange(sizes[k]), q, k)
        fs = []
        for i in range(k + 1):
            if i == 0:
                nd = dig[1:]
            elif i == k:
                nd = dig[:-1]
            else:
                nd = dig[:i - 1] + [t[dig[i - 1], dig[i]]] + dig[i + 1:]
            fs.append(_number(nd, q) if nd else np.zeros(sizes[k], dtype=np.int64))
        faces.append(tuple(fs))
    for k in range(N):
        dig = _digits(np.arange(sizes[k]), q, k)
        ones = np.full(sizes[k], e, dtype=np.int64)
        degens.append(tuple(_number(dig[:i] + [ones] + dig[i:], q) for i in range(k + 1)))
    degens.append(())
    return FinSimplicialSet(sizes, tuple(faces), tuple(degens))
