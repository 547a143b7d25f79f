"""Eigenvalue stratification of irreducible representations.

Root-of-unity bookkeeping is done on integer exponents: an eigenvalue
``exp(2 pi i e / m)`` is stored as ``e`` modulo ``m``.  Floating values only
appear at the boundary with matrices.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

import numpy as np

from . import cxla, symprod
from .partition import Partition, partitions_of
from .reps import Representation

TOL_FLAG = 1e-9
MAX_TWIST = 64


class AmbiguousClusteringWarning(UserWarning):
    """Two eigenvalue clusters are closer than twice the clustering threshold."""


SigmaType = Partition


@dataclass(frozen=True)
class EigenvalueConfig:
    """A multiset of eigenvalues on the unit circle.

    When built from exact data, ``exponents`` and ``order`` record the values
    as ``exp(2 pi i e / order)``.
    """

    values: tuple[complex, ...]
    n: int
    det_one: bool
    common_power: bool
    exponents: tuple[int, ...] | None = None
    order: int | None = None

    @classmethod
    def from_values(cls, values, n: int, tol: float = TOL_FLAG) -> EigenvalueConfig:
        values = tuple(complex(v) for v in values)
        prod = complex(np.prod(values))
        powers = [v**n for v in values]
        det_one = abs(prod - 1) <= tol
        common = max(abs(p - powers[0]) for p in powers) <= tol
        return cls(values, n, det_one, common)

    @classmethod
    def from_exponents(cls, exponents, order: int, n: int) -> EigenvalueConfig:
        exps = tuple(sorted(e % order for e in exponents))
        values = tuple(cxla.from_turns(e / order) for e in exps)
        det_one = sum(exps) % order == 0
        common = len({(e * n) % order for e in exps}) == 1
        return cls(values, n, det_one, common, exps, order)

    @property
    def r(self) -> int:
        return len(self.values)

    def to_json(self) -> dict:
        out = {
            "values": [cxla.cx_to_json(v) for v in self.values],
            "n": self.n,
            "det_one": self.det_one,
            "common_power": self.common_power,
        }
        if self.exponents is not None:
            out["exponents"] = list(self.exponents)
            out["order"] = self.order
        return out


def eigenvalue_map(rep: Representation, tol: float = 1e-8) -> EigenvalueConfig:
    """Eigenvalues of ``A`` as a configuration on the unit circle, flags computed."""
    a = np.asarray(rep.A)
    if rep.is_unitary_group:
        values = [lam for lam, _ in cxla.eig_unitary(a, tol=tol)]
    else:
        lam, inv = cxla.eig_sl2(a, tol=tol)
        if abs(abs(lam) - 1) > tol:
            raise ValueError("A has eigenvalues off the unit circle")
        if abs(lam - inv) <= cxla.TAU_CLUSTER and cxla.frob(a - lam * np.eye(2)) > tol:
            raise ValueError("A is not diagonalizable")
        values = [lam, inv]
    return EigenvalueConfig.from_values(values, rep.n)


def sigma_of(config: EigenvalueConfig, tau_cluster: float = cxla.TAU_CLUSTER) -> SigmaType:
    """Multiplicity pattern of the eigenvalues.

    Exact configurations compare exponents; floating ones cluster by
    transitive closure within ``tau_cluster`` and emit
    ``AmbiguousClusteringWarning`` when clusters nearly touch.
    """
    if config.exponents is not None:
        return Partition.from_sizes(Counter(config.exponents).values())
    clusters, ambiguous = cxla.cluster_values(config.values, tau_cluster)
    if ambiguous:
        warnings.warn(
            f"eigenvalue clusters closer than {2 * tau_cluster:g}", AmbiguousClusteringWarning, stacklevel=2
        )
    return Partition.from_sizes(len(c) for c in clusters)


def _check_range(r: int, n: int):
    if r not in (2, 3):
        raise ValueError(f"rank must be 2 or 3, got {r}")
    if not 1 <= n <= MAX_TWIST:
        raise ValueError(f"twist must be in 1..{MAX_TWIST}, got {n}")


def enumerate_su_configs(r: int, n: int) -> list[EigenvalueConfig]:
    """Every SU(r) eigenvalue multiset with ``lam_1^n = ... = lam_r^n`` an r-th root of unity.

    Work in exponents modulo ``n r``: ``xi = exp(2 pi i k / r)`` has the n-th
    roots with exponents ``e = k (mod r)``; keep multisets whose exponent
    sum vanishes modulo ``n r``.
    """
    _check_range(r, n)
    m = n * r
    out = []
    for k in range(r):
        candidates = range(k, m, r)
        for combo in combinations_with_replacement(candidates, r):
            if sum(combo) % m == 0:
                out.append(EigenvalueConfig.from_exponents(combo, m, n))
    out.sort(key=lambda c: c.exponents)
    return out


def n_sigma_formula(r: int, n: int, sigma: SigmaType) -> Fraction:
    """``(r / n) * n! / (a_1! ... a_s! (n - a_1 - ... - a_s)!)``.

    ``a_i`` is the number of distinct eigenvalues of multiplicity ``r_i``,
    i.e. the multiplicities of the part sizes of ``sigma``.  The value is 0
    when ``sigma`` needs more distinct values than ``n``.
    """
    a = sigma.multiplicities
    rest = n - sum(a)
    if rest < 0:
        return Fraction(0)
    multinom = math.factorial(n) // (math.prod(math.factorial(x) for x in a) * math.factorial(rest))
    return Fraction(r * multinom, n)


@dataclass(frozen=True)
class CountRow:
    sigma: SigmaType
    enumerated: int
    formula: Fraction
    status: str

    def to_json(self) -> dict:
        formula = int(self.formula) if self.formula.denominator == 1 else None
        return {
            "sigma": list(self.sigma.sizes),
            "enumerated": self.enumerated,
            "formula": formula,
            "status": self.status,
        }


@dataclass(frozen=True)
class CountReport:
    r: int
    n: int
    counts: dict
    rows: tuple[CountRow, ...]

    @property
    def coprime(self) -> bool:
        return math.gcd(self.n, self.r) == 1

    def to_json(self) -> dict:
        return {"r": self.r, "n": self.n, "counts": [row.to_json() for row in self.rows]}


def count_by_sigma(r: int, n: int) -> CountReport:
    """Enumerated configuration counts per sigma type, compared with the formula.

    Rows with ``gcd(n, r) != 1`` are marked ``conjectural`` whatever the
    comparison gives; the enumeration is the ground truth there.
    """
    configs = enumerate_su_configs(r, n)
    counts = Counter(sigma_of(c) for c in configs)
    rows = []
    for sigma in partitions_of(r):
        got = counts.get(sigma, 0)
        formula = n_sigma_formula(r, n, sigma)
        if math.gcd(n, r) != 1:
            status = "conjectural"
        else:
            status = "match" if formula == got else "mismatch"
        rows.append(CountRow(sigma, got, formula, status))
    return CountReport(r, n, {s: counts.get(s, 0) for s in partitions_of(r)}, tuple(rows))


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """``A`` diagonal in log-cut order and ``B`` reduced modulo the stabilizer of ``A``.

    With distinct eigenvalues the torus gauge makes ``Bred[i, 0]`` real and
    nonnegative for ``i >= 1``; ``unique`` records that all of them are
    nonzero.  ``det_phase`` is ``det(B)``, trivially 1 for SU(r).
    ``conjugator`` satisfies ``conjugator^H B conjugator = Bred``.
    """

    eigenvalues: tuple[complex, ...]
    Bred: np.ndarray
    sigma: SigmaType
    unique: bool
    conjugator: np.ndarray
    det_phase: complex

    def as_representation(self, n: int, group: str) -> Representation:
        return Representation(n, group, cxla.diag(self.eigenvalues), self.Bred)

    def to_json(self) -> dict:
        return {
            "eigenvalues": [cxla.cx_to_json(v) for v in self.eigenvalues],
            "Bred": cxla.mat_to_json(self.Bred),
            "sigma": list(self.sigma.sizes),
            "unique": self.unique,
            "det_phase": cxla.cx_to_json(self.det_phase),
        }


def canonical_form(rep: Representation, tol: float = 1e-9, tau_cluster: float = cxla.TAU_CLUSTER) -> CanonicalForm:
    """Normal form of ``(A, B)`` up to unitary conjugation.

    Repeated eigenvalues leave a block gauge that is only reduced by taking
    an orthonormal eigenbasis; those forms are flagged ``unique = False``.
    """
    a, b = np.asarray(rep.A), np.asarray(rep.B)
    if cxla.unitarity_defect(a) > 1e-8:
        raise ValueError("canonical_form needs unitary A")
    pairs = cxla.eig_unitary(a, tol=1e-8, tau_cluster=tau_cluster)
    order = symprod.log_cut_indices([cxla.turns(lam) for lam, _ in pairs])
    eigs = tuple(pairs[i][0] for i in order)
    p = np.column_stack([pairs[i][1] for i in order])
    bp = cxla.dagger(p) @ b @ p
    sigma = sigma_of(EigenvalueConfig.from_values(eigs, rep.n), tau_cluster)
    unique = False
    if all(s == 1 for s in sigma.sizes):
        phases = np.ones(rep.r, dtype=np.complex128)
        unique = True
        for i in range(1, rep.r):
            mag = abs(bp[i, 0])
            if mag > tol:
                phases[i] = bp[i, 0] / mag
            else:
                unique = False
        d = np.diag(phases)
        bp = cxla.dagger(d) @ bp @ d
        for i in range(1, rep.r):
            bp[i, 0] = abs(bp[i, 0])
        p = p @ d
    return CanonicalForm(eigs, bp, sigma, unique, p, complex(np.linalg.det(bp)))


@dataclass(frozen=True)
class OrthantPoint:
    """First column ``(z, x_2, ..., x_r)`` of the reduced ``B``."""

    z: complex
    x: tuple[float, ...]

    @property
    def interior(self) -> bool:
        return all(v > 0 for v in self.x)

    @property
    def norm(self) -> float:
        return math.sqrt(abs(self.z) ** 2 + sum(v * v for v in self.x))


def orthant_coords(cf: CanonicalForm) -> OrthantPoint:
    if any(s != 1 for s in cf.sigma.sizes):
        raise ValueError("orthant coordinates need distinct eigenvalues")
    col = cf.Bred[:, 0]
    return OrthantPoint(complex(col[0]), tuple(float(v.real) for v in col[1:]))


@dataclass(frozen=True)
class UConfigNormal:
    """Distinct eigenvalues written as ``base * exp(2 pi i k_j / n)``."""

    base: complex
    exponents: tuple[int, ...]
    n: int

    @property
    def roots(self) -> tuple[complex, ...]:
        return tuple(cxla.from_turns(k / self.n) for k in self.exponents)

    def reconstruct(self) -> tuple[complex, ...]:
        return (self.base,) + tuple(self.base * e for e in self.roots)


def u_config_normalize(config: EigenvalueConfig, tau_cluster: float = cxla.TAU_CLUSTER) -> UConfigNormal:
    """Factor distinct eigenvalues with a common n-th power through the first one."""
    if not config.common_power:
        raise ValueError("eigenvalues do not share their n-th power")
    n = config.n
    if config.exponents is not None and config.order % n == 0:
        m = config.order
        distinct = sorted(set(config.exponents))
        order = symprod.log_cut_indices([Fraction(e, m) for e in distinct])
        exps = [distinct[i] for i in order]
        # common n-th power forces e_j = e_1 modulo m / n
        ks = tuple(((e - exps[0]) % m) // (m // n) for e in exps[1:])
        return UConfigNormal(cxla.from_turns(exps[0] / m), ks, n)
    clusters, _ = cxla.cluster_values(config.values, tau_cluster)
    reps = [config.values[c[0]] for c in clusters]
    order = symprod.log_cut_indices([cxla.turns(v) for v in reps])
    vals = [reps[i] for i in order]
    base = vals[0]
    ks = []
    for v in vals[1:]:
        eps = v / base
        k = round(n * cxla.turns(eps)) % n
        if abs(eps - cxla.from_turns(k / n)) > 1e-9:
            raise ValueError("eigenvalue ratio is not an n-th root of unity")
        ks.append(k)
    return UConfigNormal(base, tuple(ks), n)
