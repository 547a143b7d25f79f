"""Small-dimension complex linear algebra.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128`` and
shape ``(r, r)`` with ``r`` in ``{1, 2, 3}``.  Scalars are Python ``complex``.
Every tolerance is an explicit keyword argument; the module-level constants
below are only the documented defaults.
"""

from __future__ import annotations

import cmath
import math
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

TAU_UNIT = 1e-9
TAU_CLUSTER = 1e-7
TAU_GROUP = 1e-9

_TURN = 2.0 * math.pi


def as_mat(x) -> np.ndarray:
    """Coerce ``x`` to a finite square complex matrix of size 1, 2 or 3."""
    m = np.array(x, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (1, 2, 3):
        raise ValueError(f"expected a square 1x1, 2x2 or 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def mat_mul(x, y) -> np.ndarray:
    x, y = as_mat(x), as_mat(y)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return x @ y


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def frob(m) -> float:
    return float(np.linalg.norm(m))


def turns(z: complex) -> float:
    """Argument of ``z`` as a fraction of a full turn, in ``[0, 1)``."""
    a = cmath.phase(z) / _TURN
    a = a % 1.0
    return 0.0 if a == 1.0 else a


def from_turns(a: float) -> complex:
    return cmath.exp(1j * _TURN * a)


def unitarity_defect(m: np.ndarray) -> float:
    m = as_mat(m)
    return frob(dagger(m) @ m - np.eye(m.shape[0]))


def classify_group(m, tol: float = TAU_GROUP) -> frozenset[str]:
    """Tags among ``unitary``, ``special`` and ``sl2c`` that ``m`` satisfies."""
    m = as_mat(m)
    tags = set()
    if unitarity_defect(m) <= tol:
        tags.add("unitary")
    if abs(np.linalg.det(m) - 1.0) <= tol:
        tags.add("special")
        if m.shape[0] == 2:
            tags.add("sl2c")
    return frozenset(tags)


def cluster_values(values: Sequence[complex], tau: float = TAU_CLUSTER) -> tuple[list[list[int]], bool]:
    """Group indices of ``values`` by transitive closure of ``|v_i - v_j| <= tau``.

    Returns the clusters (each sorted, listed by smallest member) and a flag
    that is set when two different clusters come closer than ``2 * tau``.
    """
    k = len(values)
    parent = list(range(k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(k):
        for j in range(i + 1, k):
            if abs(values[i] - values[j]) <= tau:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    clusters = sorted(groups.values(), key=lambda g: g[0])
    ambiguous = False
    for a in range(len(clusters)):
        for b in range(a + 1, len(clusters)):
            d = min(abs(values[i] - values[j]) for i in clusters[a] for j in clusters[b])
            if d < 2 * tau:
                ambiguous = True
    return clusters, ambiguous


def smallest_singular(m: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest singular value of ``m`` and a unit right singular vector for it."""
    _, s, vh = np.linalg.svd(m)
    v = np.conj(vh[-1])
    return float(s[-1]) if len(s) == vh.shape[0] else 0.0, v


def nullspace(m: np.ndarray, dim: int) -> np.ndarray:
    """Orthonormal basis (as columns) of the ``dim`` least-singular right directions of ``m``."""
    _, _, vh = np.linalg.svd(m)
    return np.conj(vh[vh.shape[0] - dim:]).T


def eig_unitary(m, tol: float = TAU_UNIT, tau_cluster: float = TAU_CLUSTER) -> list[tuple[complex, np.ndarray]]:
    """Eigenpairs of a unitary matrix with orthonormal eigenvectors.

    Uses the complex Schur form, which for a normal matrix is diagonal with a
    unitary change of basis, so repeated eigenvalues still come with an
    orthonormal eigenspace basis.  Eigenvalues closer than ``tau_cluster`` are
    replaced by their common (unit-normalized) mean.  Pairs are returned in
    increasing argument order, clusters contiguous.
    """
    m = as_mat(m)
    if unitarity_defect(m) > tol:
        raise ValueError("eig_unitary: matrix is not unitary within tolerance")
    t, z = scipy.linalg.schur(m, output="complex")
    lam = [complex(v) for v in np.diag(t)]
    clusters, _ = cluster_values(lam, tau_cluster)
    merged = list(lam)
    for c in clusters:
        mean = sum(lam[i] for i in c) / len(c)
        mean /= abs(mean)
        for i in c:
            merged[i] = mean
    order = sorted(range(len(lam)), key=lambda i: (turns(merged[i]), i))
    return [(merged[i], z[:, i].copy()) for i in order]


def eig_sl2(m, tol: float = TAU_GROUP) -> tuple[complex, complex]:
    """Eigenvalues ``(lam, 1/lam)`` of an SL(2,C) matrix with ``|lam| >= 1``.

    Modulus ties are broken towards nonnegative imaginary part.
    """
    m = as_mat(m)
    if m.shape != (2, 2) or abs(np.linalg.det(m) - 1.0) > tol:
        raise ValueError("eig_sl2: matrix is not in SL(2,C)")
    tr = complex(m[0, 0] + m[1, 1])
    disc = cmath.sqrt(tr * tr - 4.0)
    r1, r2 = (tr + disc) / 2.0, (tr - disc) / 2.0
    if abs(abs(r1) - abs(r2)) <= 1e-12 * max(1.0, abs(r1)):
        lam = r1 if r1.imag >= r2.imag else r2
    else:
        lam = r1 if abs(r1) > abs(r2) else r2
    return lam, 1.0 / lam


def random_unitary(r: int, seed=None, special: bool = False) -> np.ndarray:
    """Haar-random element of U(r), or SU(r) when ``special``.

    ``seed`` may be an integer or a ``numpy.random.Generator``; integer seeds
    give reproducible matrices.
    """
    if r not in (1, 2, 3):
        raise ValueError("random_unitary supports r in {1, 2, 3}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    g = (rng.standard_normal((r, r)) + 1j * rng.standard_normal((r, r))) / math.sqrt(2.0)
    q, rr = np.linalg.qr(g)
    d = np.diag(rr)
    q = q * (d / np.abs(d))
    if special:
        q[:, -1] /= np.linalg.det(q)
    return q


def diag(values: Iterable[complex]) -> np.ndarray:
    return np.diag(np.array(list(values), dtype=np.complex128))


def cx_to_json(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def cx_from_json(v) -> complex:
    if len(v) != 2:
        raise ValueError(f"complex scalar must be [re, im], got {v!r}")
    return complex(float(v[0]), float(v[1]))


def mat_to_json(m: np.ndarray) -> list:
    return [[cx_to_json(z) for z in row] for row in np.asarray(m)]


def mat_from_json(rows) -> np.ndarray:
    return as_mat([[cx_from_json(z) for z in row] for row in rows])
