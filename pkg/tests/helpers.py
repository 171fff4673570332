"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the library code paths it is
used to check: closed-form eigenpairs, union-find component counting, and
brute-force GF(2) ranks.
"""

import numpy as np


def random_cloud(rng, n_min=4, n_max=8, dim_min=1, dim_max=3, scale=1.0):
    n = int(rng.integers(n_min, n_max + 1))
    dim = int(rng.integers(dim_min, dim_max + 1))
    return rng.uniform(0.0, scale, size=(n, dim))


def components_at_scale(points, eps):
    """Union-find count of connected components of the 2*eps neighbor graph."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(pts[i] - pts[j]) <= 2.0 * eps:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    return len({find(i) for i in range(n)})


def ssh4_bonds(lam, v=1.0, w=1.0):
    return (v - lam * w, v + lam * w, v - lam * w)


def ssh4_ground_closed_form(lam):
    """Exact ground eigenpair of the 4-site palindromic chain (a, b, a).

    The reflection-antisymmetric ansatz (p, q, -q, -p) with q = (E/a) p gives
    E^2 + b E - a^2 = 0; the ground state is the negative root.
    """
    a, b, _ = ssh4_bonds(lam)
    energy = (-b - np.sqrt(b * b + 4.0 * a * a)) / 2.0
    ratio = energy / a
    p = 1.0 / np.sqrt(2.0 * (1.0 + ratio * ratio))
    q = ratio * p
    vec = np.array([p, q, -q, -p])
    if vec[0] < 0:
        vec = -vec
    return float(energy), vec


def ssh4_top_closed_form(lam):
    """Exact highest eigenpair of the same chain (symmetric ansatz)."""
    a, b, _ = ssh4_bonds(lam)
    energy = (b + np.sqrt(b * b + 4.0 * a * a)) / 2.0
    ratio = energy / a
    p = 1.0 / np.sqrt(2.0 * (1.0 + ratio * ratio))
    q = ratio * p
    vec = np.array([p, q, q, p])
    return float(energy), vec


def ssh4_expectations_closed_form(lam):
    """Expectation 10-vector (densities, then re/im per bond) of the ground state."""
    _, v = ssh4_ground_closed_form(lam)
    dens = list(v ** 2)
    corr = []
    for i in range(3):
        corr.extend([2.0 * v[i] * v[i + 1], 0.0])
    return np.array(dens + corr)


def ssh4_cloud_angle(lam):
    """Arc coordinate of the expectation point: the cloud lies on a circle.

    With the reflection-antisymmetric ground state written as
    (cos t, -sin t, sin t, -cos t)/sqrt(2), the chord between parameters obeys
    |Phi(l1) - Phi(l2)| = sqrt(2) sin(|u1 - u2| / 2) for u = 2 t.
    """
    a, b, _ = ssh4_bonds(lam)
    tan_t = (b + np.sqrt(b * b + 4.0 * a * a)) / (2.0 * a)
    return 2.0 * np.arctan(tan_t)


def ssh4_cloud_chord(lam1, lam2):
    du = abs(ssh4_cloud_angle(lam1) - ssh4_cloud_angle(lam2))
    return float(np.sqrt(2.0) * np.sin(du / 2.0))


def gf2_matrix_rank(rows):
    """Rank over GF(2) of a dense 0/1 matrix given as a list of row lists."""
    mat = [list(map(int, r)) for r in rows]
    rank = 0
    n_rows = len(mat)
    n_cols = len(mat[0]) if n_rows else 0
    pivot_row = 0
    for col in range(n_cols):
        pivot = next((r for r in range(pivot_row, n_rows) if mat[r][col] % 2), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        for r in range(n_rows):
            if r != pivot_row and mat[r][col] % 2:
                mat[r] = [(x + y) % 2 for x, y in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        rank += 1
    return rank
