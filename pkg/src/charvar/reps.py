"""Representations of the twisted Hopf link group ``<a, b | [a^n, b] = 1>``.

A representation is a pair of matrices ``(A, B)`` in one of the groups
U(r), SU(r) (``r <= 3``) or SL(2,C) satisfying ``A^n B = B A^n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import cxla
from .partition import Partition

GROUPS = {
    "U(1)": ("U", 1),
    "U(2)": ("U", 2),
    "SU(2)": ("SU", 2),
    "U(3)": ("U", 3),
    "SU(3)": ("SU", 3),
    "SL(2,C)": ("SL", 2),
}

TOL_RELATION = 1e-9
TOL_RANK = 1e-7
TOL_MEMBERSHIP = 1e-8


def _frozen(m) -> np.ndarray:
    m = cxla.as_mat(m).copy()
    m.flags.writeable = False
    return m


def member_of(group: str, m, tol: float = TOL_MEMBERSHIP) -> bool:
    family, r = GROUPS[group]
    if np.shape(m) != (r, r):
        return False
    tags = cxla.classify_group(m, tol)
    if family == "U":
        return "unitary" in tags
    if family == "SU":
        return {"unitary", "special"} <= tags
    return "sl2c" in tags


@dataclass(frozen=True, eq=False)
class Representation:
    """Images ``A = rho(a)``, ``B = rho(b)`` of the generators.

    Group membership of both matrices is checked on construction at
    ``TOL_MEMBERSHIP``; the group relation is not (see ``check_relation``).
    """

    n: int
    group: str
    A: np.ndarray
    B: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}; expected one of {sorted(GROUPS)}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"twist count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "A", _frozen(self.A))
        object.__setattr__(self, "B", _frozen(self.B))
        r = GROUPS[self.group][1]
        if self.A.shape != (r, r) or self.B.shape != (r, r):
            raise ValueError(f"{self.group} needs {r}x{r} matrices")
        if self.check:
            for name in ("A", "B"):
                if not member_of(self.group, getattr(self, name)):
                    raise ValueError(f"{name} is not in {self.group}")

    @property
    def r(self) -> int:
        return self.A.shape[0]

    @property
    def family(self) -> str:
        return GROUPS[self.group][0]

    @property
    def is_unitary_group(self) -> bool:
        return self.family in ("U", "SU")

    def conjugate(self, p: np.ndarray) -> Representation:
        """The representation ``(P A P^-1, P B P^-1)``."""
        pinv = np.linalg.inv(p)
        return Representation(self.n, self.group, p @ self.A @ pinv, p @ self.B @ pinv)

    def to_json(self) -> dict:
        return {
            "n": int(self.n),
            "group": self.group,
            "A": cxla.mat_to_json(self.A),
            "B": cxla.mat_to_json(self.B),
        }

    @classmethod
    def from_json(cls, obj: dict) -> Representation:
        try:
            return cls(int(obj["n"]), str(obj["group"]), cxla.mat_from_json(obj["A"]), cxla.mat_from_json(obj["B"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed representation: {exc}") from exc

    @classmethod
    def load(cls, path) -> Representation:
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def check_relation(rep: Representation, tol: float = TOL_RELATION) -> tuple[bool, float]:
    """Whether ``A^n`` commutes with ``B``; returns ``(ok, ||A^n B - B A^n||_F)``."""
    an = np.linalg.matrix_power(rep.A, rep.n)
    residual = cxla.frob(an @ rep.B - rep.B @ an)
    return residual <= tol, residual


def _eigenvalues(m: np.ndarray) -> list[complex]:
    if m.shape == (2, 2) and abs(np.linalg.det(m) - 1.0) <= 1e-6:
        return list(cxla.eig_sl2(m, tol=1e-6))
    return [complex(v) for v in np.linalg.eigvals(m)]


def common_eigenvector(A, B, tol: float = TOL_RANK):
    """A common eigenvector of ``A`` and ``B`` as ``(v, lam, mu)``, or ``None``.

    For every eigenvalue pair the stacked matrix ``[A - lam I; B - mu I]`` is
    tested for a numerical kernel: smallest singular value at most
    ``tol * max(1, ||stack||)``.  The pair with the smallest such value wins.
    """
    A, B = cxla.as_mat(A), cxla.as_mat(B)
    r = A.shape[0]
    eye = np.eye(r)
    best = None
    for lam in _eigenvalues(A):
        for mu in _eigenvalues(B):
            stack = np.vstack([A - lam * eye, B - mu * eye])
            s, v = cxla.smallest_singular(stack)
            if s <= tol * max(1.0, cxla.frob(stack)) and (best is None or s < best[0]):
                best = (s, v, lam, mu)
    if best is None:
        return None
    _, v, lam, mu = best
    return v, lam, mu


def is_irreducible(rep: Representation, tol: float = TOL_RANK) -> bool:
    """No proper subspace invariant under both ``A`` and ``B``.

    In the supported ranks this reduces to the absence of a common
    eigenvector: a unitary representation splits orthogonally, so any proper
    invariant subspace of C^2 or C^3 has an invariant line or an invariant
    complement that is a line; in SL(2,C) a proper invariant subspace is a line.
    """
    if rep.r == 1:
        return True
    return common_eigenvector(rep.A, rep.B, tol) is None


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Orthogonal splitting ``A = P diag(A_t) P^H``, ``B = P diag(B_t) P^H``.

    ``summands`` holds ``(dim, A_t, B_t)`` with irreducible blocks in
    canonical order: decreasing dimension, then increasing eigenvalue
    arguments of ``A_t`` (and of ``B_t`` to break ties).
    """

    summands: tuple[tuple[int, np.ndarray, np.ndarray], ...]
    conjugator: np.ndarray
    partition: Partition

    def block_diagonal(self) -> tuple[np.ndarray, np.ndarray]:
        r = self.conjugator.shape[0]
        a = np.zeros((r, r), dtype=np.complex128)
        b = np.zeros((r, r), dtype=np.complex128)
        i = 0
        for dim, at, bt in self.summands:
            a[i:i + dim, i:i + dim] = at
            b[i:i + dim, i:i + dim] = bt
            i += dim
        return a, b

    def reassemble(self) -> tuple[np.ndarray, np.ndarray]:
        p = self.conjugator
        a, b = self.block_diagonal()
        return p @ a @ cxla.dagger(p), p @ b @ cxla.dagger(p)

    def to_json(self) -> dict:
        return {
            "partition": list(self.partition.sizes),
            "conjugator": cxla.mat_to_json(self.conjugator),
            "summands": [
                {"dim": dim, "A": cxla.mat_to_json(at), "B": cxla.mat_to_json(bt)}
                for dim, at, bt in self.summands
            ],
        }


def _block_key(block: np.ndarray, a: np.ndarray, b: np.ndarray):
    arg_a = sorted(cxla.turns(z) for z in np.linalg.eigvals(a))
    arg_b = sorted(cxla.turns(z) for z in np.linalg.eigvals(b))
    return (-block.shape[1], arg_a, arg_b)


def decompose(rep: Representation, tol: float = TOL_RANK) -> Decomposition:
    """Split a unitary representation into irreducible orthogonal summands."""
    if not rep.is_unitary_group:
        raise ValueError("decompose needs a unitary group; SL(2,C) classes are handled by retract.to_coords")
    A, B = np.asarray(rep.A), np.asarray(rep.B)

    def split(q: np.ndarray) -> list[np.ndarray]:
        k = q.shape[1]
        if k == 1:
            return [q]
        ak, bk = cxla.dagger(q) @ A @ q, cxla.dagger(q) @ B @ q
        found = common_eigenvector(ak, bk, tol)
        if found is None:
            return [q]
        v = found[0] / np.linalg.norm(found[0])
        rest = cxla.nullspace(np.conj(v)[None, :], k - 1)
        return [q @ v[:, None]] + split(q @ rest)

    blocks = []
    for q in split(np.eye(rep.r, dtype=np.complex128)):
        blocks.append((q, cxla.dagger(q) @ A @ q, cxla.dagger(q) @ B @ q))
    blocks.sort(key=lambda t: _block_key(*t))
    conj = np.hstack([q for q, _, _ in blocks])
    summands = tuple((q.shape[1], a, b) for q, a, b in blocks)
    return Decomposition(summands, conj, Partition.from_sizes(d for d, _, _ in summands))


def power_scalar(rep: Representation, tol: float = 1e-8) -> complex | None:
    """``xi`` when ``||A^n - xi I|| <= tol`` with ``xi = (A^n)_11``, else ``None``."""
    an = np.linalg.matrix_power(rep.A, rep.n)
    xi = complex(an[0, 0])
    if cxla.frob(an - xi * np.eye(rep.r)) <= tol:
        return xi
    return None
