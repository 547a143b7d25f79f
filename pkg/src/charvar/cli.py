"""Command-line interface: every subcommand prints one JSON report.

Exit codes: 0 success (warnings allowed), 2 input error, 3 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__, cxla, homology, reps, retract, strata, symprod
from .partition import Partition

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INVARIANT = 3

STRATA = ("irreducible", "totally-reducible")


class InputError(Exception):
    pass


class InvariantViolation(Exception):
    pass


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def _read_json(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text), text
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_rep(path: str) -> tuple[reps.Representation, str]:
    obj, text = _read_json(path)
    try:
        return reps.Representation.from_json(obj), text
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _tags(m) -> list[str]:
    return sorted(cxla.classify_group(m, reps.TOL_MEMBERSHIP))


def _sl2_partition(rep, tol_relation) -> tuple[list[int], dict]:
    c = retract.to_coords(rep, tol_relation)
    if isinstance(c, retract.ReducibleCoords):
        return [1, 1], {"kind": "reducible", "lambda": cxla.cx_to_json(c.lam), "mu": cxla.cx_to_json(c.mu)}
    return [2], {
        "kind": "irreducible",
        "a": cxla.cx_to_json(c.a),
        "d": cxla.cx_to_json(c.d),
        "p": cxla.cx_to_json(c.p),
        "lambda": cxla.cx_to_json(c.lam),
    }


def run_classify(args) -> tuple[dict, dict, list[str]]:
    rep, text = _load_rep(args.path)
    warns = []
    ok, residual = reps.check_relation(rep, args.tol_relation)
    if not ok:
        warns.append(f"relation residual {residual:.3g} exceeds tolerance {args.tol_relation:g}")
    res = {
        "n": rep.n,
        "group": rep.group,
        "tags": {"A": _tags(rep.A), "B": _tags(rep.B)},
        "relation": {"ok": ok, "residual": residual},
        "irreducible": reps.is_irreducible(rep),
    }
    if rep.is_unitary_group:
        res["partition"] = list(reps.decompose(rep).partition.sizes)
    elif ok:
        res["partition"], res["coords"] = _sl2_partition(rep, args.tol_relation)
    else:
        res["partition"] = [2] if res["irreducible"] else [1, 1]
    try:
        config = strata.eigenvalue_map(rep)
        res["sigma"] = list(strata.sigma_of(config, args.tol_cluster).sizes)
        res["eigenvalues"] = config.to_json()
    except ValueError as exc:
        res["sigma"] = None
        warns.append(f"no eigenvalue configuration: {exc}")
    xi = reps.power_scalar(rep)
    res["xi"] = None if xi is None else cxla.cx_to_json(xi)
    if rep.is_unitary_group:
        cf = strata.canonical_form(rep, tau_cluster=args.tol_cluster)
        res["canonical_form"] = cf.to_json()
        if all(s == 1 for s in cf.sigma.sizes):
            pt = strata.orthant_coords(cf)
            res["orthant"] = {"z": cxla.cx_to_json(pt.z), "x": list(pt.x), "interior": pt.interior}
    if rep.group == "SL(2,C)" and res["irreducible"]:
        s_min = _near_reducible_margin(rep)
        if s_min <= 1e3 * reps.TOL_RANK:
            warns.append(f"borderline reducibility: common-eigenvector margin {s_min:.3g}")
    return res, {"path": args.path, "file": text}, warns


def _near_reducible_margin(rep) -> float:
    best = math.inf
    for lam in reps._eigenvalues(np.asarray(rep.A)):
        for mu in reps._eigenvalues(np.asarray(rep.B)):
            stack = np.vstack([rep.A - lam * np.eye(2), rep.B - mu * np.eye(2)])
            s, _ = cxla.smallest_singular(stack)
            best = min(best, s / max(1.0, cxla.frob(stack)))
    return best


def run_enumerate(args) -> tuple[dict, dict, list[str]]:
    try:
        report = strata.count_by_sigma(args.rank, args.twist)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    warns = []
    if not report.coprime:
        warns.append(f"gcd(n, r) = {math.gcd(args.twist, args.rank)}: formula comparison is conjectural")
    return report.to_json(), {"rank": args.rank, "twist": args.twist}, warns


def run_retract(args) -> tuple[dict, dict, list[str]]:
    rep, text = _load_rep(args.input)
    if rep.group not in ("SL(2,C)", "SU(2)"):
        raise InputError("retract needs an SL(2,C) or SU(2) representation")
    try:
        flow = retract.full_flow(rep, steps=args.steps, tol=args.tol_relation)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ok, residual = reps.check_relation(flow.final, 1e-8)
    if not ok or not reps.member_of("SU(2)", flow.final.A) or not reps.member_of("SU(2)", flow.final.B):
        raise InvariantViolation(f"retraction endpoint is not an SU(2) representation (residual {residual:.3g})")
    samples = [s.to_json() for s in flow.trace.samples]
    if args.trace:
        with open(args.trace, "w") as fh:
            for rec in samples:
                fh.write(json.dumps(rec, sort_keys=True) + "\n")
    final_c = flow.final_coords
    res = {
        "kind": samples[0]["kind"],
        "steps": args.steps,
        "samples": len(samples),
        "initial": samples[0],
        "final": samples[-1],
        "final_representation": flow.final.to_json(),
        "final_partition": [1, 1] if isinstance(final_c, retract.ReducibleCoords) else [2],
        "min_abs_d": flow.trace.min_abs_d,
        "max_residual_constraint": max(s["residual_constraint"] for s in samples),
        "max_residual_relation": max(s["residual_relation"] for s in samples),
    }
    return res, {"input": args.input, "file": text, "steps": args.steps}, list(flow.warnings)


def run_homology(args) -> tuple[dict, dict, list[str]]:
    try:
        cw = homology.build_su2_model(args.twist)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    prof = homology.homology(cw)
    warns = []
    if any(prof.torsion):
        warns.append("torsion present in grid model")
    return prof.to_json(), {"twist": args.twist}, warns


def _parse_turns(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not an angle in turns: {text!r}") from exc


def run_pillowcase(args) -> tuple[dict, dict, list[str]]:
    s, t = _parse_turns(args.s), _parse_turns(args.t)
    pt = symprod.pillowcase_map(s, t)
    return pt.to_json(), {"s": args.s, "t": args.t}, []


def _sample_irreducible(group: str, n: int, count: int, rng) -> list[reps.Representation]:
    family, r = reps.GROUPS[group]
    configs = [c for c in strata.enumerate_su_configs(r, n) if len(set(c.exponents)) > 1]
    if not configs:
        return []
    out = []
    while len(out) < count:
        cfg = configs[rng.integers(len(configs))]
        vals = np.array(cfg.values)
        if family == "U":
            vals = vals * cxla.from_turns(rng.random())
        p = cxla.random_unitary(r, rng, special=family == "SU")
        a = p @ cxla.diag(vals) @ cxla.dagger(p)
        b = cxla.random_unitary(r, rng, special=family == "SU")
        rep = reps.Representation(n, group, a, b)
        if reps.is_irreducible(rep):
            out.append(rep)
    return out


def _random_diag(r: int, special: bool, rng) -> np.ndarray:
    ang = rng.random(r)
    if special:
        ang[-1] = -ang[:-1].sum()
    return cxla.diag([cxla.from_turns(x) for x in ang])


def _sample_reducible(group: str, n: int, count: int, rng) -> list[reps.Representation]:
    family, r = reps.GROUPS[group]
    out = []
    for _ in range(count):
        p = cxla.random_unitary(r, rng, special=family == "SU")
        a = p @ _random_diag(r, family == "SU", rng) @ cxla.dagger(p)
        b = p @ _random_diag(r, family == "SU", rng) @ cxla.dagger(p)
        out.append(reps.Representation(n, group, a, b))
    return out


def run_sample(args) -> tuple[dict, dict, list[str]]:
    if args.group not in reps.GROUPS or reps.GROUPS[args.group][0] == "SL":
        raise InputError(f"sample supports unitary groups, got {args.group!r}")
    if args.stratum == "irreducible" and reps.GROUPS[args.group][1] < 2:
        raise InputError("U(1) has no irreducible stratum to sample beyond every representation")
    if args.count < 0 or not 1 <= args.twist <= strata.MAX_TWIST:
        raise InputError("count must be >= 0 and twist in 1..64")
    seed = _seed(args)
    rng = np.random.default_rng(seed)
    warns = []
    if args.stratum == "irreducible":
        samples = _sample_irreducible(args.group, args.twist, args.count, rng)
        if not samples and args.count:
            warns.append(f"irreducible stratum of {args.group} is empty for n = {args.twist}")
    else:
        samples = _sample_reducible(args.group, args.twist, args.count, rng)
    files = []
    classes = []
    if samples:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
    for i, rep in enumerate(samples):
        path = Path(args.out_dir) / f"sample_{i:04d}.json"
        path.write_text(json.dumps(rep.to_json(), sort_keys=True) + "\n")
        files.append(str(path))
        part = reps.decompose(rep).partition
        expected = Partition.from_sizes([rep.r]) if args.stratum == "irreducible" else Partition.from_sizes([1] * rep.r)
        if part != expected:
            raise InvariantViolation(f"sample {i} classifies as {part}, expected {expected}")
        classes.append(list(part.sizes))
    res = {
        "group": args.group,
        "stratum": args.stratum,
        "twist": args.twist,
        "count": len(samples),
        "empty": not samples and args.count > 0,
        "files": files,
        "partitions": classes,
    }
    inputs = {
        "group": args.group,
        "stratum": args.stratum,
        "count": args.count,
        "twist": args.twist,
        "seed": seed,
        "out_dir": args.out_dir,
    }
    return res, inputs, warns


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CHARVAR_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError as exc:
        raise InputError(f"CHARVAR_SEED must be an integer, got {env!r}") from exc


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies use SUPPRESS so a flag given before the subcommand survives
    def dflt(v):
        return argparse.SUPPRESS if suppress else v

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", default=dflt(False), help="indent the JSON report")
    common.add_argument(
        "--tol-relation",
        type=float,
        default=dflt(reps.TOL_RELATION),
        help=f"tolerance on ||A^n B - B A^n||_F (default: {reps.TOL_RELATION:g})",
    )
    common.add_argument(
        "--tol-cluster",
        type=float,
        default=dflt(cxla.TAU_CLUSTER),
        help=f"eigenvalue clustering threshold (default: {cxla.TAU_CLUSTER:g})",
    )
    common.add_argument(
        "--seed", type=int, default=dflt(None), help="random seed; falls back to $CHARVAR_SEED, then 0"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    top = _common_options(False)
    common = _common_options(True)

    p = argparse.ArgumentParser(prog="charvar", description=__doc__.splitlines()[0], parents=[top])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    c = sub.add_parser("classify", parents=[common], help="classify a representation JSON file")
    c.add_argument("path")
    c.set_defaults(func=run_classify)

    e = sub.add_parser("enumerate", parents=[common], help="count SU(r) eigenvalue configurations by sigma type")
    e.add_argument("--rank", "-r", type=int, required=True, help="matrix size r in {2, 3}")
    e.add_argument("--twist", "-n", type=int, required=True, help="twist count n in 1..64")
    e.set_defaults(func=run_enumerate)

    rt = sub.add_parser("retract", parents=[common], help="run the SL(2,C) -> SU(2) retraction")
    rt.add_argument("--input", required=True, help="representation JSON file")
    rt.add_argument("--steps", type=int, default=32, help="samples per stage (default: %(default)s)")
    rt.add_argument("--trace", default=None, help="write one JSON record per sample to this file")
    rt.set_defaults(func=run_retract)

    h = sub.add_parser("homology", parents=[common], help="cellular homology of the SU(2) model")
    h.add_argument("--twist", "-n", type=int, required=True)
    h.set_defaults(func=run_homology)

    s = sub.add_parser("sample", parents=[common], help="write random representations in a stratum")
    s.add_argument("--group", required=True, choices=[g for g, (fam, _) in reps.GROUPS.items() if fam != "SL"])
    s.add_argument("--stratum", required=True, choices=STRATA)
    s.add_argument("--count", type=int, default=10, help="number of files (default: %(default)s)")
    s.add_argument("--twist", "-n", type=int, default=5, help="twist count (default: %(default)s)")
    s.add_argument("--out-dir", default="samples", help="output directory (default: %(default)s)")
    s.set_defaults(func=run_sample)

    pc = sub.add_parser("pillowcase", parents=[common], help="canonical pillowcase point of (s, t) in turns")
    pc.add_argument("s")
    pc.add_argument("t")
    pc.set_defaults(func=run_pillowcase)
    return p


def _emit(report: dict, pretty: bool, stream):
    stream.write(json.dumps(report, sort_keys=True, indent=2 if pretty else None) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        results, inputs, warns = args.func(args)
    except InputError as exc:
        _emit({"subcommand": args.subcommand, "error": str(exc), "version": __version__}, args.pretty, sys.stderr)
        return EXIT_INPUT
    except (InvariantViolation, AssertionError) as exc:
        _emit({"subcommand": args.subcommand, "error": str(exc), "version": __version__}, args.pretty, sys.stderr)
        return EXIT_INVARIANT
    inputs = dict(inputs, subcommand=args.subcommand, tol_relation=args.tol_relation, tol_cluster=args.tol_cluster)
    report = {
        "subcommand": args.subcommand,
        "inputs_digest": _digest(inputs),
        "results": results,
        "warnings": warns,
        "version": __version__,
    }
    _emit(report, args.pretty, sys.stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
