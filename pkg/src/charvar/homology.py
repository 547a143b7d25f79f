"""Integral cellular homology of small CW complexes.

The main model is the SU(2) character variety of the twisted Hopf link: the
pillowcase (torus modulo ``(s, t) -> (-s, -t)``) with ``n - 1`` discs glued
along the circles ``s = k / 2n``, ``k = 1, ..., n - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SNFResult:
    """Nonzero invariant factors ``d_1 | d_2 | ...`` and the rank.

    When requested, ``transforms`` is ``(U, V)`` with ``U M V = D`` and both
    factors unimodular.
    """

    divisors: tuple[int, ...]
    rank: int
    transforms: tuple | None = None


def _copy(m):
    return [list(row) for row in m]


def _identity(k):
    return [[int(i == j) for j in range(k)] for i in range(k)]


def smith_normal_form(m, transforms: bool = False) -> SNFResult:
    """Smith normal form of an integer matrix given as a list of rows.

    Exact Python-integer arithmetic, so there is no overflow to guard.
    """
    a = _copy(m)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    for row in a:
        for x in row:
            if int(x) != x:
                raise ValueError("smith_normal_form needs integer entries")
    a = [[int(x) for x in row] for row in a]
    u = _identity(rows) if transforms else None
    v = _identity(cols) if transforms else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        if v is not None:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        if u is not None:
            u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        if v is not None:
            for row in v:
                row[dst] += k * row[src]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if u is not None:
            u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # pivot must divide the rest of the trailing block
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    divisors = tuple(a[i][i] for i in range(t))
    return SNFResult(divisors, len(divisors), (u, v) if transforms else None)


def matmul_int(x, y):
    if not x:
        return []
    inner = len(y)
    cols = len(y[0]) if inner else 0
    return [[sum(x[i][k] * y[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(x))]


@dataclass
class CWModel:
    """Cells per dimension and integer boundary matrices.

    ``boundary[k]`` (for ``k >= 1``) has one row per ``(k-1)``-cell and one
    column per ``k``-cell.  ``labels[k][i]`` says where cell ``i`` came from.
    """

    cells: list[list]
    boundary: dict[int, list[list[int]]]
    labels: list[list[str]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.cells) - 1

    def counts(self) -> list[int]:
        return [len(c) for c in self.cells]

    def boundary_matrix(self, k: int) -> list[list[int]]:
        """``boundary[k]``, with empty or out-of-range degrees as zero matrices."""
        if k in self.boundary:
            return self.boundary[k]
        counts = self.counts()
        rows = counts[k - 1] if 0 <= k - 1 < len(counts) else 0
        cols = counts[k] if 0 <= k < len(counts) else 0
        return [[0] * cols for _ in range(rows)]

    def check_chain_complex(self) -> bool:
        for k in range(2, self.dim + 1):
            prod = matmul_int(self.boundary_matrix(k - 1), self.boundary_matrix(k))
            if any(x for row in prod for x in row):
                return False
        return True

    def euler(self) -> int:
        return sum((-1) ** k * c for k, c in enumerate(self.counts()))


@dataclass(frozen=True)
class HomologyProfile:
    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]
    euler: int
    cells: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "betti": list(self.betti),
            "torsion": [list(t) for t in self.torsion],
            "euler": self.euler,
            "cells": list(self.cells),
        }


def _rank_and_divisors(m) -> tuple[int, tuple[int, ...]]:
    if not m or not m[0]:
        return 0, ()
    snf = smith_normal_form(m)
    return snf.rank, snf.divisors


def homology(cw: CWModel) -> HomologyProfile:
    """Betti numbers and torsion coefficients in every degree ``0..dim``."""
    if not cw.check_chain_complex():
        raise ValueError("boundary maps do not square to zero")
    counts = cw.counts()
    ranks = {}
    divs = {}
    for k in range(1, cw.dim + 2):
        ranks[k], divs[k] = _rank_and_divisors(cw.boundary_matrix(k))
    betti = tuple(counts[k] - ranks.get(k, 0) - ranks[k + 1] for k in range(cw.dim + 1))
    torsion = tuple(tuple(d for d in divs[k + 1] if d > 1) for k in range(cw.dim + 1))
    return HomologyProfile(betti, torsion, cw.euler(), tuple(counts))


class _CellIndex:
    def __init__(self):
        self.keys: list = []
        self.labels: list[str] = []
        self.index: dict = {}

    def add(self, key, label):
        self.index[key] = len(self.keys)
        self.keys.append(key)
        self.labels.append(label)


def torus_grid(n: int):
    """Cells of the ``2n x 2`` grid on the torus ``[0,1]^2 / Z^2`` with boundaries.

    Vertex ``(i, j)`` sits at ``(i / 2n, j / 2)``; ``('h', i, j)`` runs in the
    ``s`` direction from vertex ``(i, j)``, ``('v', i, j)`` in the ``t``
    direction, and face ``('f', i, j)`` is the square with lower-left corner
    ``(i, j)``.  Boundaries are dicts ``cell -> coefficient``.
    """
    m = 2 * n
    verts = [("p", i, j) for i in range(m) for j in range(2)]
    edges = [(kind, i, j) for kind in ("h", "v") for i in range(m) for j in range(2)]
    faces = [("f", i, j) for i in range(m) for j in range(2)]

    def bd(cell):
        kind, i, j = cell
        out: dict = {}

        def acc(c, k):
            out[c] = out.get(c, 0) + k

        if kind == "h":
            acc(("p", (i + 1) % m, j), 1)
            acc(("p", i, j), -1)
        elif kind == "v":
            acc(("p", i, (j + 1) % 2), 1)
            acc(("p", i, j), -1)
        elif kind == "f":
            acc(("h", i, j), 1)
            acc(("v", (i + 1) % m, j), 1)
            acc(("h", i, (j + 1) % 2), -1)
            acc(("v", i, j), -1)
        return {c: k for c, k in out.items() if k}

    return verts, edges, faces, bd


def torus_involution(n: int):
    """Action of ``(s, t) -> (-s, -t)`` on grid cells as ``cell -> (image, sign)``."""
    m = 2 * n

    def act(cell):
        kind, i, j = cell
        if kind == "p":
            return ("p", (-i) % m, (-j) % 2), 1
        if kind == "h":
            return ("h", (-i - 1) % m, j), -1
        if kind == "v":
            return ("v", (-i) % m, (j - 1) % 2), -1
        return ("f", (-i - 1) % m, (j - 1) % 2), 1

    return act


def build_su2_model(n: int) -> CWModel:
    """CW model of the SU(2) character variety for twist ``n``.

    The torus grid is quotiented by the involution (free on edges and faces,
    four fixed vertices), then one disc is attached along each circle
    ``s = k / 2n`` for ``k = 1..n-1`` through the edge cycle
    ``v(k, 0) + v(k, 1)``.
    """
    if not 1 <= n <= 64:
        raise ValueError("twist must be in 1..64")
    verts, edges, faces, bd = torus_grid(n)
    act = torus_involution(n)

    def orbit_rep(cell):
        img, sign = act(cell)
        if img == cell:
            return cell, 1
        return (cell, 1) if cell < img else (img, sign)

    levels = [_CellIndex() for _ in range(3)]
    for k, cells in enumerate((verts, edges, faces)):
        for cell in sorted(cells):
            rep, _ = orbit_rep(cell)
            if rep == cell:
                s = cell[1] / (2 * n)
                t = cell[2] / 2
                levels[k].add(cell, f"pillowcase {['vertex', 'edge', 'face'][k]} {cell[0]} at (s={s:g}, t={t:g})")

    def quotient_boundary(cell) -> dict:
        out: dict = {}
        for c, k in bd(cell).items():
            rep, sign = orbit_rep(c)
            out[rep] = out.get(rep, 0) + sign * k
        return out

    for k in range(1, n):
        levels[2].add(("disc", k), f"attached disc {k} along s={k}/{2 * n}")

    boundary = {}
    for k in (1, 2):
        rows, cols = levels[k - 1], levels[k]
        mat = [[0] * len(cols.keys) for _ in rows.keys]
        for j, cell in enumerate(cols.keys):
            if cell[0] == "disc":
                word = {("v", cell[1], 0): 1, ("v", cell[1], 1): 1}
                terms = {}
                for c, coef in word.items():
                    rep, sign = orbit_rep(c)
                    terms[rep] = terms.get(rep, 0) + sign * coef
            else:
                terms = quotient_boundary(cell)
            for c, coef in terms.items():
                mat[rows.index[c]][j] += coef
        boundary[k] = mat
    cw = CWModel([lv.keys for lv in levels], boundary, [lv.labels for lv in levels])
    if not cw.check_chain_complex():
        raise AssertionError("quotient complex is not a chain complex")
    return cw


def fixed_vertices(n: int) -> list:
    """Grid vertices fixed by the involution."""
    verts, _, _, _ = torus_grid(n)
    act = torus_involution(n)
    return [v for v in verts if act(v)[0] == v]


def model_cp_minus_hyperbola() -> CWModel:
    """A CW model for the complement of ``{ad = 1}`` in ``C^2``.

    Over ``u = ad - 1`` in ``C*`` the fibres ``{ad = 1 + u}`` are circles up to
    homotopy except the contractible cross at ``u = -1``.  Up to homotopy this
    is a torus (base loop ``x`` times fibre loop ``y``) with a disc glued along
    ``y``, i.e. a pinched torus.  Degrees 3 and 4 are present and empty so the
    profile covers the real dimension of the space.
    """
    cells = [["x0"], ["x", "y"], ["torus", "cone"], [], []]
    boundary = {
        1: [[0, 0]],
        2: [[0, 0], [0, 1]],
    }
    labels = [
        ["base point"],
        ["loop around the hyperbola", "fibre loop"],
        ["torus x*y*x^-1*y^-1", "disc coning the fibre over u = -1"],
        [],
        [],
    ]
    return CWModel(cells, boundary, labels)
