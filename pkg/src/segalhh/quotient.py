"""Union-find and canonical quotient labelling of finite indexed sets."""
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components


class UnionFind:
    """Disjoint sets on ``0..n-1`` with path halving and union by size."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if self.size[rx] < self.size[ry]:
            rx, ry = ry, rx
        self.parent[ry] = rx
        self.size[rx] += self.size[ry]
        return True

    def labels(self):
        """Canonical labels: classes numbered by their least member, in increasing order."""
        roots = [self.find(x) for x in range(len(self.parent))]
        return canonical_labels(np.asarray(roots, dtype=np.int64))


def canonical_labels(raw):
    """Relabel an arbitrary class assignment so classes are ``0..k-1`` ordered by least member."""
    raw = np.asarray(raw, dtype=np.int64)
    if raw.size == 0:
        return raw.copy()
    _, first, inverse = np.unique(raw, return_index=True, return_inverse=True)
    order = np.argsort(np.argsort(first))
    return order[inverse].astype(np.int64)


def coequalize(n, left, right):
    """Labels of the quotient of ``0..n-1`` by the equivalence generated by ``left[k] ~ right[k]``.

    Vectorised through connected components of the relation graph; labels are
    canonical (least member order), so the result depends only on the relation.
    """
    left = np.asarray(left, dtype=np.int64).ravel()
    right = np.asarray(right, dtype=np.int64).ravel()
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(left.size, dtype=np.int8), (left, right)), shape=(n, n))
    _, raw = connected_components(graph, directed=True, connection="weak")
    return canonical_labels(raw)


def representatives(labels):
    """Least member of each class, indexed by class label."""
    labels = np.asarray(labels, dtype=np.int64)
    k = int(labels.max()) + 1 if labels.size else 0
    reps = np.full(k, labels.size, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(labels.size, dtype=np.int64))
    return reps
