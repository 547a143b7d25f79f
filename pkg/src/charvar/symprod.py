"""Symmetric products of the circle and of the torus.

Angles are measured in turns (fractions of a full circle) and reduced into
``[0, 1)``.  Functions that only add, negate and reduce angles are written
generically so they also run exactly on ``fractions.Fraction`` input.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import cxla
from .partition import Partition

TIE_TOL = 1e-12


def _mod1(x):
    y = x % 1
    return 0 * y if y == 1 else y


@dataclass(frozen=True)
class CircleMultiset:
    angles: tuple

    def __post_init__(self):
        object.__setattr__(self, "angles", tuple(sorted(_mod1(a) for a in self.angles)))

    @property
    def r(self) -> int:
        return len(self.angles)


@dataclass(frozen=True)
class TorusMultiset:
    """Unordered points ``(lambda angle, mu angle)`` on the torus."""

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted((_mod1(s), _mod1(t)) for s, t in self.points)))

    @property
    def r(self) -> int:
        return len(self.points)

    def first_factor(self) -> CircleMultiset:
        return CircleMultiset(tuple(s for s, _ in self.points))


@dataclass(frozen=True)
class SimplexCoords:
    """Circular gaps between consecutive points, starting at the cut; they sum to 1."""

    gaps: tuple[float, ...]
    cut: float


@dataclass(frozen=True)
class PillowcasePoint:
    s: float
    t: float
    orbifold: bool

    def to_json(self) -> dict:
        return {"s": float(self.s), "t": float(self.t), "orbifold": self.orbifold}


def _circle(cm) -> CircleMultiset:
    return cm if isinstance(cm, CircleMultiset) else CircleMultiset(tuple(cm))


def _torus(tm) -> TorusMultiset:
    return tm if isinstance(tm, TorusMultiset) else TorusMultiset(tuple(tm))


def log_cut_indices(angles: Sequence[float]) -> list[int]:
    """Indices of ``angles`` (in turns) listed in log-cut order.

    The cut sits at the point that follows the largest circular gap; among
    gaps equal up to ``TIE_TOL`` the one whose following point has the
    smallest angle wins.  Coincident points keep their input order.
    """
    if not angles:
        raise ValueError("log-cut ordering needs at least one point")
    red = [_mod1(a) for a in angles]
    idx = sorted(range(len(red)), key=lambda i: (red[i], i))
    srt = [red[i] for i in idx]
    # gap ending at position k, i.e. from srt[k-1] to srt[k]
    before = [(srt[k] - srt[k - 1]) if k else 1 - (srt[-1] - srt[0]) for k in range(len(srt))]
    widest = max(before)
    start = min(k for k in range(len(srt)) if before[k] >= widest - TIE_TOL)
    return idx[start:] + idx[:start]


def log_cut_order(cm) -> tuple[SimplexCoords, tuple[float, ...]]:
    """Points of a circle multiset ordered from the log cut, with their gaps.

    This largest-gap rule is a deterministic stand-in for choosing the
    logarithm branch; it is not a reproduction of any published algorithm.
    """
    angles = _circle(cm).angles
    ordered = tuple(angles[i] for i in log_cut_indices(angles))
    gaps = [(ordered[i + 1] - ordered[i]) % 1 for i in range(len(ordered) - 1)]
    gaps.append(1 - sum(gaps))
    return SimplexCoords(tuple(float(g) for g in gaps), ordered[0]), ordered


def ssym_membership(tm, tol: float = 1e-9) -> bool:
    """Both products ``prod lambda_i`` and ``prod mu_i`` equal 1."""
    t, s = fibration_product(tm)
    return min(t, 1 - t) <= tol and min(s, 1 - s) <= tol


def fibration_product(tm) -> tuple:
    """Angles of ``(prod lambda_i, prod mu_i)``."""
    pts = _torus(tm).points
    return _mod1(sum(p for p, _ in pts)), _mod1(sum(q for _, q in pts))


def trivialize(tm, theta, alpha) -> TorusMultiset:
    """Local trivialization of the product fibration: shift every point by
    ``(theta / r, alpha / r)`` so the base point moves by ``(theta, alpha)``.

    ``theta`` and ``alpha`` are in turns, within ``(-1/2, 1/2)``.
    """
    tm = _torus(tm)
    r = tm.r
    return TorusMultiset(tuple((p + theta / r, q + alpha / r) for p, q in tm.points))


def _is_half_integer(x, tol) -> bool:
    y = _mod1(2 * x)
    return min(y, 1 - y) <= tol


def pillowcase_map(s, t, tol: float = 0.0) -> PillowcasePoint:
    """Canonical representative of ``{(s, t), (1 - s, 1 - t)}`` on the torus.

    The representative is the lexicographically smaller pair.  ``orbifold``
    marks the four fixed points ``s, t in {0, 1/2}``; ``tol`` loosens that test
    for floating input.
    """
    s, t = _mod1(s), _mod1(t)
    other = (_mod1(1 - s), _mod1(1 - t))
    cs, ct = min((s, t), other)
    return PillowcasePoint(cs, ct, _is_half_integer(cs, tol) and _is_half_integer(ct, tol))


def monodromy_shift(p: PillowcasePoint, tol: float = 0.0) -> PillowcasePoint:
    """The monodromy ``(s, t) -> (s + 1/2, t + 1/2)`` on the pillowcase."""
    half = Fraction(1, 2) if isinstance(p.s, Fraction) else 0.5
    return pillowcase_map(p.s + half, p.t + half, tol)


STRATUM_NAMES = {
    (1, 1): "open cylinder: distinct first coordinates",
    (2,): "boundary interval: coincident first coordinates",
    (1, 1, 1): "open triangle times torus: distinct first coordinates",
    (2, 1): "triangle edges: two coincident first coordinates",
    (3,): "triangle vertices: three coincident first coordinates",
}


@dataclass(frozen=True)
class SymStratum:
    sigma: Partition
    name: str


def sym_stratify(tm, tau_cluster: float = cxla.TAU_CLUSTER) -> SymStratum:
    """Stratum of a point of Sym^2 or Sym^3 of the torus by coincidences of
    the first coordinates."""
    tm = _torus(tm)
    if tm.r not in (2, 3):
        raise ValueError("sym_stratify supports r in {2, 3}")
    values = [cxla.from_turns(float(s)) for s, _ in tm.points]
    clusters, _ = cxla.cluster_values(values, tau_cluster)
    sigma = Partition.from_sizes(len(c) for c in clusters)
    return SymStratum(sigma, STRATUM_NAMES[sigma.sizes])


def orbifold_points() -> list[PillowcasePoint]:
    half = Fraction(1, 2)
    return [pillowcase_map(s, t) for s in (Fraction(0), half) for t in (Fraction(0), half)]


def angles_of(values: Iterable[complex]) -> list[float]:
    return [cxla.turns(z) for z in values]


def circle_multiset_of(values: Sequence[complex]) -> CircleMultiset:
    return CircleMultiset(tuple(angles_of(values)))
