"""Deformation retraction of SL(2,C) classes onto SU(2) classes.

Irreducible classes with ``A ~ diag(lam, 1/lam)`` and ``B = [[a, c], [b, d]]``
are tracked through the invariants ``(a, d, p = bc)`` subject to
``a d - p = 1``.  The flow runs three closed-form stages:

* ``rescale``: equalize ``|a|`` and ``|d|`` keeping ``|a| |d|`` fixed,
* ``phase``: rotate ``d`` linearly onto ``conj(a)``,
* ``radial``: pull ``a`` into the closed unit disc.

Reducible classes ``(lam, mu) ~ (1/lam, 1/mu)`` are pulled radially onto the
torus, log-linearly in the moduli.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import cxla
from .reps import Representation, check_relation, common_eigenvector

STAGES = ("rescale", "phase", "radial")
TOL_PRECONDITION = 1e-9


def h1(rr: float, ss: float, t: float) -> float:
    """First modulus homotopy: ``(1-t) r + t sqrt(rs)`` when ``r >= s``.

    For ``r < s`` it is ``rs / ((1-t) s + t sqrt(rs))``, evaluated as
    ``r / ((1-t) + t sqrt(r/s))`` so tiny moduli do not underflow.
    """
    if rr < 0 or ss < 0:
        raise ValueError("h1 needs nonnegative moduli")
    if rr >= ss:
        return (1 - t) * rr + t * math.sqrt(rr) * math.sqrt(ss)
    if rr == 0:
        return 0.0
    return rr / ((1 - t) + t * math.sqrt(rr / ss))


def h2(rr: float, ss: float, t: float) -> float:
    """Second modulus homotopy, mirror image of ``h1``; ``h1 * h2 = r s``."""
    if rr < 0 or ss < 0:
        raise ValueError("h2 needs nonnegative moduli")
    return h1(ss, rr, t)


@dataclass(frozen=True)
class IrredCoords:
    a: complex
    d: complex
    p: complex
    lam: complex

    @property
    def constraint_residual(self) -> float:
        return abs(self.a * self.d - self.p - 1)


@dataclass(frozen=True)
class ReducibleCoords:
    """Character of a reducible class, stored as the canonical member of
    ``{(lam, mu), (1/lam, 1/mu)}``."""

    lam: complex
    mu: complex

    def __post_init__(self):
        if self.lam == 0 or self.mu == 0:
            raise ValueError("reducible coordinates must be nonzero")
        lam, mu = canonical_pair(self.lam, self.mu)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mu", mu)

    def involution(self) -> tuple[complex, complex]:
        return 1 / self.lam, 1 / self.mu


def _prefer(x: complex, y: complex, eps: float = 1e-12) -> int:
    """+1 if ``x`` beats ``y`` (larger modulus, then larger imaginary part), -1 if worse, 0 on tie."""
    scale = max(1.0, abs(x), abs(y))
    if abs(abs(x) - abs(y)) > eps * scale:
        return 1 if abs(x) > abs(y) else -1
    if abs(x.imag - y.imag) > eps * scale:
        return 1 if x.imag > y.imag else -1
    return 0


def canonical_pair(lam: complex, mu: complex) -> tuple[complex, complex]:
    """Representative of ``(lam, mu) ~ (1/lam, 1/mu)``: ``|lam| >= 1`` with ties
    broken by the imaginary part of ``lam`` and then by ``mu`` the same way."""
    lam, mu = complex(lam), complex(mu)
    other = (1 / lam, 1 / mu)
    c = _prefer(lam, other[0])
    if c == 0:
        c = _prefer(mu, other[1])
    return (lam, mu) if c >= 0 else other


def _relation_tol(rep: Representation, tol: float) -> float:
    an = np.linalg.matrix_power(rep.A, rep.n)
    return tol * max(1.0, cxla.frob(an) * cxla.frob(rep.B))


def to_coords(rep: Representation, tol: float = 1e-9, rank_tol: float = 1e-7):
    """Coordinates of the class of an SL(2,C) (or SU(2)) representation.

    The relation tolerance is scaled by ``||A^n|| ||B||`` so that
    ill-conditioned conjugates are judged fairly.
    """
    if rep.group not in ("SL(2,C)", "SU(2)"):
        raise ValueError("to_coords needs an SL(2,C) or SU(2) representation")
    ok, residual = check_relation(rep, _relation_tol(rep, tol))
    if not ok:
        raise ValueError(f"relation [A^n, B] = 1 violated (residual {residual:.3g})")
    a_mat, b_mat = np.asarray(rep.A), np.asarray(rep.B)
    found = common_eigenvector(a_mat, b_mat, rank_tol)
    if found is not None:
        v = found[0]
        vv = np.vdot(v, v)
        lam = complex(np.vdot(v, a_mat @ v) / vv)
        mu = complex(np.vdot(v, b_mat @ v) / vv)
        return ReducibleCoords(lam, mu)
    lam, inv = cxla.eig_sl2(a_mat, tol=1e-8)
    if abs(lam - inv) <= 1e-7:
        raise ValueError("A = +-I cannot carry an irreducible representation")
    v1 = cxla.nullspace(a_mat - lam * np.eye(2), 1)[:, 0]
    v2 = cxla.nullspace(a_mat - inv * np.eye(2), 1)[:, 0]
    p = np.column_stack([v1, v2])
    bp = np.linalg.solve(p, b_mat @ p)
    if abs(lam ** (2 * rep.n) - 1) > 1e-7:
        raise ValueError("irreducible class with lam^(2n) != 1; relation cannot hold")
    return IrredCoords(complex(bp[0, 0]), complex(bp[1, 1]), complex(bp[1, 0] * bp[0, 1]), lam)


def stage_rescale(c: IrredCoords, t: float) -> IrredCoords:
    r, s = abs(c.a), abs(c.d)
    a = c.a * (h1(r, s, t) / r) if r > 0 else 0j
    d = c.d * (h2(r, s, t) / s) if s > 0 else 0j
    return IrredCoords(a, d, a * d - 1, c.lam)


def stage_phase(c: IrredCoords, t: float, tol: float = TOL_PRECONDITION) -> IrredCoords:
    r, s = abs(c.a), abs(c.d)
    if abs(r - s) > tol * max(1.0, r):
        raise ValueError("stage_phase needs |a| = |d|")
    if r == 0 or s == 0:
        # both vanish up to tol here; (0, 0) is a fixed point
        return IrredCoords(0j, 0j, -1 + 0j, c.lam)
    beta = cmath.phase(c.d)
    alpha = cmath.phase(c.a)
    d = r * ((1 - t) * cmath.exp(1j * beta) + t * cmath.exp(-1j * alpha))
    return IrredCoords(c.a, d, c.a * d - 1, c.lam)


def stage_radial(c: IrredCoords, t: float, tol: float = TOL_PRECONDITION) -> IrredCoords:
    r = abs(c.a)
    if abs(c.d - c.a.conjugate()) > tol * max(1.0, r):
        raise ValueError("stage_radial needs d = conj(a)")
    rho = 1.0 if r <= 1 else (1 - t) + t / r
    a = c.a * rho
    return IrredCoords(a, a.conjugate(), complex(abs(a) ** 2 - 1), c.lam)


def _rescale_modulus(z: complex, t: float) -> complex:
    # |z| -> |z|^(1-t), linear in log|z|
    m = abs(z)
    return z * (m ** (1 - t) / m)


def reducible_retract(c: ReducibleCoords, t: float) -> ReducibleCoords:
    """Radial retraction of ``(C*)^2`` onto the torus, log-linear on moduli.

    It commutes with ``(lam, mu) -> (1/lam, 1/mu)`` and fixes the torus.
    """
    return ReducibleCoords(_rescale_modulus(c.lam, t), _rescale_modulus(c.mu, t))


def coords_matrices(c) -> tuple[np.ndarray, np.ndarray]:
    """A representative pair ``(A, B)`` for coordinates.

    SU(2)-shaped points ``d = conj(a)``, real ``p <= 0`` use
    ``b = sqrt(-p) = -c``; other points split ``p`` as ``b = c = sqrt(p)``.
    """
    if isinstance(c, ReducibleCoords):
        return cxla.diag([c.lam, 1 / c.lam]), cxla.diag([c.mu, 1 / c.mu])
    a_mat = cxla.diag([c.lam, 1 / c.lam])
    su2_shaped = abs(c.d - c.a.conjugate()) <= 1e-9 and abs(c.p.imag) <= 1e-12 and c.p.real <= 1e-12
    if su2_shaped:
        b = math.sqrt(max(0.0, -c.p.real))
        low, up = b, -b
    else:
        low = cmath.sqrt(c.p)
        up = low
    return a_mat, np.array([[c.a, up], [low, c.d]], dtype=np.complex128)


@dataclass(frozen=True)
class TraceSample:
    stage: str
    t: float
    a: complex
    d: complex
    p: complex
    residual_constraint: float
    residual_relation: float
    kind: str
    lam: complex
    mu: complex | None = None

    def to_json(self) -> dict:
        out = {
            "stage": self.stage,
            "t": self.t,
            "kind": self.kind,
            "a": cxla.cx_to_json(self.a),
            "d": cxla.cx_to_json(self.d),
            "p": cxla.cx_to_json(self.p),
            "lambda": cxla.cx_to_json(self.lam),
            "residual_constraint": self.residual_constraint,
            "residual_relation": self.residual_relation,
        }
        if self.mu is not None:
            out["mu"] = cxla.cx_to_json(self.mu)
        return out


@dataclass(frozen=True)
class RetractionTrace:
    samples: tuple[TraceSample, ...]
    min_abs_d: float | None = None

    def stage(self, name: str) -> list[TraceSample]:
        return [s for s in self.samples if s.stage == name]


@dataclass(frozen=True, eq=False)
class FlowResult:
    trace: RetractionTrace
    final: Representation
    initial_coords: object
    final_coords: object
    warnings: tuple[str, ...] = field(default=())


def _sample(stage, t, c, n) -> TraceSample:
    a_mat, b_mat = coords_matrices(c)
    an = np.linalg.matrix_power(a_mat, n)
    rel = cxla.frob(an @ b_mat - b_mat @ an)
    if isinstance(c, ReducibleCoords):
        a, d = c.mu, 1 / c.mu
        return TraceSample(stage, t, a, d, 0j, abs(a * d - 1), rel, "reducible", c.lam, c.mu)
    return TraceSample(stage, t, c.a, c.d, c.p, c.constraint_residual, rel, "irreducible", c.lam)


def full_flow(rep: Representation, steps: int = 32, tol: float = 1e-9) -> FlowResult:
    """Run the retraction on one class; stage ``k`` covers global ``t`` in ``[k/3, (k+1)/3]``.

    The final representation is an SU(2) representative in diagonal-``A``
    normal form, so it equals the input only up to conjugation.
    """
    if steps < 1:
        raise ValueError("steps must be positive")
    c0 = to_coords(rep, tol)
    grid = [j / steps for j in range(steps + 1)]
    samples = []
    notes = []
    min_d = None
    if isinstance(c0, ReducibleCoords):
        c1 = reducible_retract(c0, 1.0)
        for k, name in enumerate(STAGES):
            for tau in grid:
                c = reducible_retract(c0, tau) if k == 0 else c1
                samples.append(_sample(name, (k + tau) / 3, c, rep.n))
        final_c = c1
    else:
        c1 = stage_rescale(c0, 1.0)
        c2 = stage_phase(c1, 1.0)
        c3 = stage_radial(c2, 1.0)
        stages = ((stage_rescale, c0), (stage_phase, c1), (stage_radial, c2))
        for k, (name, (fn, start)) in enumerate(zip(STAGES, stages)):
            for tau in grid:
                c = fn(start, tau)
                if name == "phase":
                    min_d = abs(c.d) if min_d is None else min(min_d, abs(c.d))
                samples.append(_sample(name, (k + tau) / 3, c, rep.n))
        final_c = c3
        if abs(abs(c3.a) - 1) <= 1e-9:
            notes.append("endpoint on |a| = 1: irreducible input ends on a reducible class")
    a_mat, b_mat = coords_matrices(final_c)
    final = Representation(rep.n, "SU(2)", a_mat, b_mat)
    return FlowResult(RetractionTrace(tuple(samples), min_d), final, c0, final_c, tuple(notes))
