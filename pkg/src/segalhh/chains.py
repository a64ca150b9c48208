"""Normalized integer chains, homology, and the mapping-cone equivalence surrogate."""
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .errors import CheckFailed, TruncationError
from .simplicial import nondegenerate, pi0, pi0_map, vertex
from .snf import invariant_factors

SURROGATE_NOTE = ("surrogate check: pi0 bijection plus acyclic mapping cone through the stated degree; "
                  "a necessary condition for weak equivalence, not a decision procedure")


@dataclass(frozen=True)
class HomologyGroup:
    free_rank: int
    torsion: tuple = ()
    upper_truncated: bool = False  # kernel only: no boundary from above was available

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(canonical_torsion(self.torsion)))

    @property
    def is_zero(self):
        return self.free_rank == 0 and not self.torsion

    def __add__(self, other):
        return HomologyGroup(self.free_rank + other.free_rank, self.torsion + other.torsion,
                             self.upper_truncated or other.upper_truncated)

    def to_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion),
                "upper_truncated": self.upper_truncated}

    def __str__(self):
        parts = [f"Z^{self.free_rank}" if self.free_rank > 1 else "Z"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _prime_powers(n):
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            q = 1
            while n % p == 0:
                n //= p
                q *= p
            out.append((p, q))
        p += 1
    if n > 1:
        out.append((n, n))
    return out


def canonical_torsion(coefficients):
    """Invariant-factor form (each divides the next) of a direct sum of cyclic groups."""
    by_prime = {}
    for c in coefficients:
        c = abs(int(c))
        if c <= 1:
            continue
        for p, q in _prime_powers(c):
            by_prime.setdefault(p, []).append(q)
    if not by_prime:
        return []
    length = max(len(v) for v in by_prime.values())
    factors = [1] * length
    for powers in by_prime.values():
        powers = sorted(powers)
        for k, q in enumerate(powers):
            factors[length - len(powers) + k] *= q
    return [f for f in factors if f > 1]


@dataclass(frozen=True, eq=False)
class ChainComplexZ:
    ranks: tuple
    boundaries: dict  # n -> sparse matrix C_n -> C_{n-1}, shape (ranks[n-1], ranks[n])
    generators: tuple = ()  # generators[n]: simplex index of each basis element
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def top(self):
        return len(self.ranks) - 1

    def boundary(self, n):
        if not 1 <= n <= self.top:
            raise TruncationError(f"no boundary in degree {n}")
        return self.boundaries[n]

    def invariants(self, n):
        if n not in self._cache:
            M = self.boundary(n)
            self._cache[n] = invariant_factors(M) if M.nnz else []
        return self._cache[n]

    def square_zero(self):
        return all((self.boundary(n - 1) @ self.boundary(n)).count_nonzero() == 0
                   for n in range(2, self.top + 1))


def normalized_chains(X, top=None):
    """Normalized chain complex: nondegenerate simplices, alternating face sums.

    Faces that land on degenerate simplices contribute zero. ``top`` limits the
    degrees built (default: the truncation degree).
    """
    top = X.trunc_degree if top is None else min(top, X.trunc_degree)
    gens, pos = [], []
    for n in range(top + 1):
        g = np.flatnonzero(nondegenerate(X, n))
        p = np.full(X.sizes[n], -1, dtype=np.int64)
        p[g] = np.arange(g.size)
        gens.append(g)
        pos.append(p)
    boundaries = {}
    for n in range(1, top + 1):
        rows, cols, vals = [], [], []
        for i in range(n + 1):
            target = pos[n - 1][X.faces[n][i][gens[n]]]
            keep = target >= 0
            rows.append(target[keep])
            cols.append(np.flatnonzero(keep))
            vals.append(np.full(int(keep.sum()), -1 if i % 2 else 1, dtype=np.int64))
        M = sparse.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                              shape=(gens[n - 1].size, gens[n].size)).tocsr()
        M.eliminate_zeros()
        boundaries[n] = M
    C = ChainComplexZ(tuple(g.size for g in gens), boundaries, tuple(gens))
    if not C.square_zero():
        raise CheckFailed("boundary squared is nonzero")
    return C


def homology(C, n):
    """``H_n`` via Smith normal form; at the top degree only the kernel is available."""
    if n < 0 or n > C.top:
        raise TruncationError(f"degree {n} outside 0..{C.top}")
    rank_out = len(C.invariants(n)) if n >= 1 else 0
    kernel = C.ranks[n] - rank_out
    if n == C.top:
        return HomologyGroup(kernel, (), upper_truncated=True)
    incoming = C.invariants(n + 1)
    return HomologyGroup(kernel - len(incoming), tuple(f for f in incoming if f > 1))


# ---------------------------------------------------------------- chain maps and cones

def chain_map(f, CX, CY, top):
    """Matrices of the chain map induced by a simplicial map on normalized chains."""
    mats = []
    for n in range(top + 1):
        pos_y = np.full(f.target.sizes[n], -1, dtype=np.int64)
        pos_y[CY.generators[n]] = np.arange(CY.generators[n].size)
        img = pos_y[f.components[n][CX.generators[n]]]
        keep = img >= 0
        mats.append(sparse.coo_matrix((np.ones(int(keep.sum()), dtype=np.int64), (img[keep], np.flatnonzero(keep))),
                                      shape=(CY.ranks[n], CX.ranks[n])).tocsr())
    return mats


def mapping_cone(CX, CY, fmats, top):
    """Cone complex with ``Cone_n = C_{n-1}(X) + C_n(Y)`` for ``n <= top``.

    ``d(c, y) = (-dc, dy - f c)``.
    """
    ranks = tuple((CX.ranks[n - 1] if n >= 1 else 0) + CY.ranks[n] for n in range(top + 1))
    boundaries = {}
    for n in range(1, top + 1):
        dx_prev = CX.boundary(n - 1) if n >= 2 else sparse.csr_matrix((0, CX.ranks[0]), dtype=np.int64)
        cx_rows = CX.ranks[n - 2] if n >= 2 else 0
        upper = sparse.hstack([-dx_prev, sparse.csr_matrix((cx_rows, CY.ranks[n]), dtype=np.int64)])
        lower = sparse.hstack([-fmats[n - 1], CY.boundary(n)])
        boundaries[n] = sparse.vstack([upper, lower]).tocsr().astype(np.int64)
    return ChainComplexZ(ranks, boundaries)


def _restrict(C, masks, top):
    gens = []
    idx = []
    for n in range(top + 1):
        keep = np.flatnonzero(masks[n])
        idx.append(keep)
        gens.append(C.generators[n][keep])
    boundaries = {n: C.boundaries[n][idx[n - 1]][:, idx[n]] for n in range(1, top + 1)}
    return ChainComplexZ(tuple(k.size for k in idx), boundaries, tuple(gens))


@dataclass
class EquivalenceReport:
    equivalent: bool
    up_to: int
    pi0_bijective: bool
    cone_homology: list
    note: str = SURROGATE_NOTE

    def to_dict(self):
        return {"equivalent": self.equivalent, "up_to": self.up_to, "pi0_bijective": self.pi0_bijective,
                "cone_homology": [{"degree": k, **h.to_dict()} for k, h in enumerate(self.cone_homology)],
                "surrogate": True, "note": self.note}


def homology_equivalent(f, up_to):
    """Necessary-condition surrogate for weak equivalence.

    True iff ``pi0(f)`` is a bijection and the mapping cone of the induced chain
    map has vanishing homology in degrees ``0..up_to``. The cone splits along the
    components of the target, so it is reduced one component at a time.
    """
    N = f.source.trunc_degree
    if up_to > N - 1 or up_to < 0:
        raise TruncationError(f"degree {up_to} needs truncation at least {up_to + 1}, have {N}")
    induced, ps, pt = pi0_map(f)
    bijective = ps.count == pt.count and np.unique(induced).size == pt.count
    top = up_to + 1
    CX = normalized_chains(f.source, top)
    CY = normalized_chains(f.target, top)
    fmats = chain_map(f, CX, CY, top)
    comp_y = [pt.labels[vertex(f.target, n)] for n in range(top + 1)]
    total = [HomologyGroup(0) for _ in range(up_to + 1)]
    for c in range(pt.count):
        ymask = [comp_y[n][CY.generators[n]] == c for n in range(top + 1)]
        xmask = [comp_y[n][f.components[n][CX.generators[n]]] == c for n in range(top + 1)]
        BX, BY = _restrict(CX, xmask, top), _restrict(CY, ymask, top)
        bf = [fmats[n][np.flatnonzero(ymask[n])][:, np.flatnonzero(xmask[n])] for n in range(top + 1)]
        cone = mapping_cone(BX, BY, bf, top)
        for k in range(up_to + 1):
            total[k] = total[k] + homology(cone, k)
    acyclic = all(h.is_zero for h in total)
    return EquivalenceReport(bool(bijective and acyclic), up_to, bool(bijective), total)


def simplicial_homology(X, n):
    """Convenience: ``H_n`` of the normalized chains of ``X``."""
    return homology(normalized_chains(X, min(n + 1, X.trunc_degree)), n)


def pi0_count(X):
    return pi0(X).count
