"""Sampling helpers shared by the tests."""

import numpy as np

from charvar import cxla, reps


def irreducible_su(r: int, n: int, rng, max_tries: int = 1000) -> reps.Representation:
    """Rejection sampler: A conjugate to a diagonal with common n-th power, B Haar."""
    from charvar import strata

    configs = [c for c in strata.enumerate_su_configs(r, n) if len(set(c.exponents)) > 1]
    for _ in range(max_tries):
        cfg = configs[rng.integers(len(configs))]
        p = cxla.random_unitary(r, rng, special=True)
        a = p @ cxla.diag(cfg.values) @ cxla.dagger(p)
        b = cxla.random_unitary(r, rng, special=True)
        rep = reps.Representation(n, f"SU({r})", a, b)
        if reps.is_irreducible(rep):
            return rep
    raise RuntimeError("no irreducible sample found")


def random_sl2(rng, scale: float = 1.0) -> np.ndarray:
    m = scale * (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    return m / np.sqrt(np.linalg.det(m))


def relation_sample(r: int, n: int, rng, special: bool = True) -> reps.Representation:
    """A random solution of ``[A^n, B] = 1`` that does not presuppose ``A^n`` scalar.

    Eigenvalues of ``A`` are grouped at random; inside a group they differ by
    n-th roots of unity, so ``A^n`` has one eigenspace per group.  ``B`` is
    Haar-random on each eigenspace of ``A^n`` (block-diagonal in the eigenbasis
    of ``A``).  Most samples are reducible; the irreducible ones are the
    interesting ones for rejection sampling.
    """
    ngroups = int(rng.integers(1, r + 1))
    labels = rng.integers(0, ngroups, size=r)
    base = rng.random(ngroups)
    ang = np.array([base[g] + rng.integers(n) / n for g in labels])
    vals = np.exp(2j * np.pi * ang)
    if special:
        vals = vals * np.prod(vals) ** (-1.0 / r)
    p = cxla.random_unitary(r, rng)
    a = p @ cxla.diag(vals) @ cxla.dagger(p)
    bd = np.zeros((r, r), dtype=complex)
    for g in set(labels.tolist()):
        idx = np.flatnonzero(labels == g)
        bd[np.ix_(idx, idx)] = cxla.random_unitary(len(idx), rng)
    b = p @ bd @ cxla.dagger(p)
    if special:
        b = b * np.linalg.det(b) ** (-1.0 / r)
    group = f"SU({r})" if special else f"U({r})"
    return reps.Representation(n, group, a, b)


def rejection_irreducible(r: int, n: int, rng, special: bool = True, max_tries: int = 100_000):
    for tries in range(1, max_tries + 1):
        rep = relation_sample(r, n, rng, special)
        if reps.is_irreducible(rep):
            return rep, tries
    raise RuntimeError("rejection sampling found no irreducible representation")
