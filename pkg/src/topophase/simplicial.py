"""Vietoris-Rips filtrations and boundary operators of their chain complexes.

Scale convention: a simplex is present at scale eps when all pairwise vertex
distances are at most 2*eps, so the stored birth equals half the simplex
diameter.  Filtration order is (birth, dimension, lexicographic vertices).
"""

from __future__ import annotations

import json
from bisect import bisect_right
from dataclasses import dataclass, field

import numpy as np

Z2 = "Z2"
REAL = "real"


@dataclass(frozen=True)
class Simplex:
    """Vertex tuple (strictly increasing) with its birth scale."""

    vertices: tuple
    birth: float

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True, eq=False)
class FilteredComplex:
    """Simplices in filtration order plus the metric data that produced them."""

    simplices: tuple
    n_points: int
    max_dim: int
    distance_matrix: np.ndarray
    eps_max: float
    _by_dim: tuple = field(repr=False, default=())
    _births_by_dim: tuple = field(repr=False, default=())
    _index_in_dim: tuple = field(repr=False, default=())

    def __post_init__(self):
        by_dim = [[] for _ in range(self.max_dim + 1)]
        for gi, s in enumerate(self.simplices):
            by_dim[s.dim].append(gi)
        births = tuple(np.array([self.simplices[gi].birth for gi in idx]) for idx in by_dim)
        index = tuple({self.simplices[gi].vertices: j for j, gi in enumerate(idx)} for idx in by_dim)
        object.__setattr__(self, "_by_dim", tuple(tuple(idx) for idx in by_dim))
        object.__setattr__(self, "_births_by_dim", births)
        object.__setattr__(self, "_index_in_dim", index)

    def __len__(self) -> int:
        return len(self.simplices)

    def count_dim(self, k: int) -> int:
        """Number of k-simplices in the whole filtration."""
        return len(self._by_dim[k]) if 0 <= k <= self.max_dim else 0

    def count_at(self, k: int, eps: float) -> int:
        """Number of k-simplices with birth <= eps (a prefix in dimension k)."""
        if not 0 <= k <= self.max_dim:
            return 0
        return int(bisect_right(self._births_by_dim[k].tolist(), eps))

    def simplices_of_dim(self, k: int) -> list:
        return [self.simplices[gi] for gi in self._by_dim[k]]

    def births_of_dim(self, k: int) -> np.ndarray:
        return self._births_by_dim[k]

    def index_in_dim(self, vertices: tuple) -> int:
        """Position of a simplex among same-dimension simplices, filtration order."""
        return self._index_in_dim[len(vertices) - 1][tuple(vertices)]


def vr_filtration(cloud, eps_max: float | None = None, max_dim: int = 2) -> FilteredComplex:
    """Vietoris-Rips filtration of a point cloud (or anything with ``.points``).

    Contains every simplex of dimension <= ``max_dim`` whose birth (half its
    diameter) is at most ``eps_max``; the default ``eps_max`` is half the
    cloud diameter, at which the complex is a full simplex up to ``max_dim``.
    Duplicate points are legal (zero distances allowed).
    """
    pts = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise ValueError("cloud must contain at least one point")
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    n = pts.shape[0]
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    dist = 0.5 * (dist + dist.T)
    np.fill_diagonal(dist, 0.0)
    if eps_max is None:
        eps_max = float(dist.max()) / 2.0
    elif eps_max < 0:
        raise ValueError("eps_max must be >= 0")
    thresh = 2.0 * eps_max

    neighbors = [[j for j in range(i + 1, n) if dist[i, j] <= thresh] for i in range(n)]
    found = []

    def expand(verts, cand, birth):
        found.append((birth, verts))
        if len(verts) == max_dim + 1:
            return
        for pos, v in enumerate(cand):
            b = max(birth, max(dist[u, v] for u in verts) / 2.0)
            expand(verts + (v,), [w for w in cand[pos + 1:] if dist[v, w] <= thresh], b)

    for i in range(n):
        expand((i,), neighbors[i], 0.0)

    found.sort(key=lambda item: (item[0], len(item[1]), item[1]))
    simplices = tuple(Simplex(verts, birth) for birth, verts in found)
    dist.flags.writeable = False
    return FilteredComplex(simplices, n, max_dim, dist, float(eps_max))


def complex_at_scale(complex_: FilteredComplex, eps: float) -> list:
    """Global indices of all simplices with birth <= eps (monotone in eps)."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    births = [s.birth for s in complex_.simplices]
    return list(range(bisect_right(births, eps)))


@dataclass(frozen=True)
class BoundaryMatrix:
    """Sparse boundary operator: one column per k-simplex, rows its facets.

    ``rows[j]`` lists the (k-1)-dimension indices of the facets of column j;
    ``signs[j]`` carries the alternating orientation signs, all +1 over Z2.
    """

    k: int
    field: str
    n_rows: int
    n_cols: int
    rows: tuple
    signs: tuple

    def dense(self) -> np.ndarray:
        dtype = float if self.field == REAL else np.int8
        out = np.zeros((self.n_rows, self.n_cols), dtype=dtype)
        for j, (rr, ss) in enumerate(zip(self.rows, self.signs)):
            for r, s in zip(rr, ss):
                out[r, j] = s
        return out


def boundary_matrix(complex_: FilteredComplex, k: int, field: str = Z2) -> BoundaryMatrix:
    """Boundary operator from k-chains to (k-1)-chains, filtration order.

    Over the reals a facet omitting vertex position i carries sign (-1)^i;
    over Z2 every entry is 1.
    """
    if field not in (Z2, REAL):
        raise ValueError(f"field must be {Z2!r} or {REAL!r}")
    if not 1 <= k <= complex_.max_dim:
        raise ValueError(f"k must satisfy 1 <= k <= max_dim ({complex_.max_dim}), got {k}")
    rows = []
    signs = []
    for s in complex_.simplices_of_dim(k):
        rr = []
        ss = []
        for i in range(len(s.vertices)):
            facet = s.vertices[:i] + s.vertices[i + 1:]
            rr.append(complex_.index_in_dim(facet))
            ss.append(1 if (field == Z2 or i % 2 == 0) else -1)
        rows.append(tuple(rr))
        signs.append(tuple(ss))
    return BoundaryMatrix(
        k=k,
        field=field,
        n_rows=complex_.count_dim(k - 1),
        n_cols=complex_.count_dim(k),
        rows=tuple(rows),
        signs=tuple(signs),
    )


def boundary_dense_at(complex_: FilteredComplex, k: int, eps: float) -> np.ndarray:
    """Real boundary matrix of the subcomplex at scale eps.

    Because same-dimension simplices are ordered by birth, the scale-eps
    operator is the leading block of the full one.
    """
    n_rows = complex_.count_at(k - 1, eps)
    n_cols = complex_.count_at(k, eps)
    full = boundary_matrix(complex_, k, REAL).dense() if complex_.count_dim(k) else np.zeros((n_rows, 0))
    return np.asarray(full[:n_rows, :n_cols], dtype=float)


def filtration_jsonl(complex_: FilteredComplex) -> str:
    """One JSON object per simplex, in filtration order, for cross-tool diffs."""
    lines = [
        json.dumps({"vertices": list(s.vertices), "birth": s.birth})
        for s in complex_.simplices
    ]
    return "\n".join(lines) + "\n"
