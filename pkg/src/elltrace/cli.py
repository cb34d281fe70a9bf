"""Command-line front end.

Machine-readable output (CSV or JSON) goes to stdout exclusively; progress
and diagnostics go to stderr.  Exit codes: 0 pass, 1 check failure, 2
usage/parse error.

Determinism: per-prime values are exact integers and the collector folds
them in ascending-prime order, so output is byte-identical for any worker
count.  Long residue runs can write a plain-text checkpoint file after each
checkpoint row; a killed run resumes bit-exactly (the float accumulator is
serialized as a hex float, the exact layer as decimal integers).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from fractions import Fraction

from . import curves, geometry, isogeny, moments, nagao, polys
from ._kernels import set_worker_threads
from .arith import sieve_primes
from .classnum import class_number, hurwitz_table
from .curves import FamilyParseError, WeierstrassFamily


def parse_family(path: str) -> WeierstrassFamily:
    with open(path, "r", encoding="utf-8") as fh:
        return curves.parse_family_text(fh.read(), source=path)


def _family_sha(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def _log(msg: str) -> None:
    print(msg, file=sys.stderr)


class _Output:
    """Collects rows and writes CSV or JSON to stdout or a file."""

    def __init__(self, fmt: str, path: str | None):
        self.fmt = fmt
        self.path = path
        self.rows: list[dict] = []
        self.columns: list[str] | None = None

    def add(self, row: dict) -> None:
        if self.columns is None:
            self.columns = list(row)
        self.rows.append(row)

    def emit(self) -> None:
        if self.fmt == "json":
            text = json.dumps(self.rows, indent=None, separators=(",", ":")) + "\n"
        else:
            lines = [",".join(self.columns or [])]
            for row in self.rows:
                lines.append(",".join(str(row[c]) for c in self.columns))
            text = "\n".join(lines) + "\n"
        if self.path and self.path != "-":
            with open(self.path, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


# ---------------------------------------------------------------------------
# Checkpoint files


CHECKPOINT_MAGIC = "elltrace-checkpoint v1"


def _save_checkpoint(path: str, config: str, state: nagao.SeriesState) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(CHECKPOINT_MAGIC + "\n")
        fh.write(f"config = {config}\n")
        fh.write(f"p_last = {state.p_last}\n")
        fh.write(f"exact_acc = {state.exact_acc}\n")
        fh.write(f"float_acc = {state.float_acc.hex()}\n")
        fh.write(f"grid_index = {state.grid_index}\n")
        fh.write("raws = " + ",".join(r.hex() for r in state.raws) + "\n")
    os.replace(tmp, path)


def _load_checkpoint(path: str, config: str) -> nagao.SeriesState:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not an elltrace checkpoint")
    fields = {}
    for line in lines[1:]:
        key, _, value = line.partition(" = ")
        fields[key] = value
    if fields.get("config") != config:
        raise ValueError(
            f"{path}: checkpoint config mismatch\n  have: {fields.get('config')}\n  want: {config}")
    raws = [float.fromhex(tok) for tok in fields["raws"].split(",") if tok]
    return nagao.SeriesState(
        float_acc=float.fromhex(fields["float_acc"]),
        exact_acc=int(fields["exact_acc"]),
        p_last=int(fields["p_last"]),
        raws=raws,
        grid_index=int(fields["grid_index"]),
    )


# ---------------------------------------------------------------------------
# Command handlers


def _cmd_ap(args) -> int:
    fam = parse_family(args.family)
    p = args.p
    if not fam.is_good_prime(p):
        _log(f"skip: {p} is a bad prime for this family")
        return 2
    aps = curves.fiber_aps(fam, p)
    out = _Output(args.out, args.out_path)
    for t in range(p):
        good = polys.eval_mod(fam.delta, t, p) != 0
        if good:
            kind = "good"
        else:
            kind = {1: "split_multiplicative", -1: "nonsplit_multiplicative",
                    0: "additive"}[int(aps[t])]
        out.add({"t": t, "kind": kind, "ap": int(aps[t])})
    out.emit()
    return 0


def _cmd_rank(args) -> int:
    fam = parse_family(args.family)
    value = nagao.nagao_rank_sum(fam, args.xmax)
    print(repr(value))
    return 0


def _series_config(kind: str, args, extra: str) -> str:
    ratio, first = nagao.parse_grid_spec(args.checkpoints)
    return f"{kind};{extra};n={args.n};grid={ratio}:{first};xmax={args.xmax}"


def _run_series(args, build_engine, run, config: str) -> int:
    state = None
    if args.checkpoint and os.path.exists(args.checkpoint):
        state = _load_checkpoint(args.checkpoint, config)
        _log(f"resuming from p_last={state.p_last}")
    engine = build_engine(state)

    def on_checkpoint(_) -> None:
        if args.checkpoint:
            _save_checkpoint(args.checkpoint, config, engine.state)

    series = run(engine, on_checkpoint)
    out = _Output(args.out, args.out_path)
    weighted = isinstance(series, dict)
    if weighted:
        series = next(iter(series.values()))
        for cp in series.checkpoints:
            out.add({"X": cp.X, "raw": repr(cp.raw), "smoothed": repr(cp.smoothed),
                     "paper_residue": repr(-cp.smoothed)})
    else:
        for cp in series.checkpoints:
            out.add({"X": cp.X, "raw": repr(cp.raw), "smoothed": repr(cp.smoothed)})
    out.emit()
    return 0


def _cmd_residue(args) -> int:
    fam = parse_family(args.family)
    if args.preset:
        lam = Fraction(nagao.preset_lambda(args.preset, args.n))
    elif args.lam is not None:
        lam = Fraction(args.lam)
    else:
        raise UsageError("need --preset or --lambda")
    ratio, first = nagao.parse_grid_spec(args.checkpoints)
    config = _series_config("residue", args,
                            f"family={_family_sha(args.family)};lambda={lam}")

    def build(state):
        return nagao.SeriesEngine(nagao.geometric_grid(args.xmax, ratio, first),
                                  sign=-1, state=state)

    def run(engine, on_cp):
        return nagao.residue_estimate(fam, args.n, lam, args.xmax, ratio, first,
                                      engine=engine, on_checkpoint=on_cp)

    return _run_series(args, build, run, config)


def _cmd_weighted_residue(args) -> int:
    if args.n % 2:
        raise UsageError("weighted-residue needs even --n")
    ratio, first = nagao.parse_grid_spec(args.checkpoints)
    config = _series_config("weighted-residue", args, f"level={args.level}")

    def build(state):
        return nagao.SeriesEngine(nagao.geometric_grid(args.xmax, ratio, first),
                                  sign=+1, state=state)

    def run(engine, on_cp):
        return nagao.weighted_residue_series(
            args.level, [args.n], args.xmax, ratio, first,
            engines={args.n: engine},
            on_checkpoint=lambda engines: on_cp(None))

    return _run_series(args, build, run, config)


def _cmd_classnum(args) -> int:
    table = hurwitz_table(args.disc_max)
    out = _Output(args.out, args.out_path)
    for D, hv in table.items():
        h = class_number(D) if -D <= 4 else hv.sixths // 6
        out.add({"D": D, "h": h, "hw_sixths": hv.sixths})
    out.emit()
    return 0


def _cmd_trace(args) -> int:
    out = _Output(args.out, args.out_path)
    for p in sieve_primes(args.prime_max):
        if args.level % p == 0:
            continue
        tr = moments.eichler_selberg_trace(p, args.weight, args.level)
        assert tr.denominator == 1
        out.add({"p": p, "trace": tr.numerator})
    out.emit()
    return 0


def _cmd_moment_check(args) -> int:
    ns = [int(tok) for tok in args.n.split(",")]
    out = _Output(args.out, args.out_path)
    all_ok = True
    for p in sieve_primes(args.prime_max):
        if p <= 3 or args.level % p == 0:
            continue
        for n in ns:
            with_brute = args.level == 1 and p <= args.brute_max
            r = moments.moment_report(p, n, args.level, with_brute=with_brute)
            all_ok = all_ok and r.ok
            out.add({
                "p": r.p, "n": r.n, "M": r.M,
                "brute": "" if r.brute is None else str(r.brute),
                "weighted_sixths": str(r.weighted_sixths),
                "via_trace_sixths": str(r.via_trace_sixths),
                "main_term": str(r.main_term),
                "weighted_float": r.weighted_sixths / 6.0,
                "ok": r.ok,
            })
        _log(f"moment-check p={p} done")
    out.emit()
    return 0 if all_ok else 1


def _cmd_mass_check(args) -> int:
    table = hurwitz_table(4 * args.prime_max)
    all_ok = True
    for p in sieve_primes(args.prime_max):
        if p <= 3:
            continue
        counts = moments.curve_trace_counts(p)
        amax = len(counts) // 2
        ok = True
        for a in range(1, amax + 1):
            if a * a >= 4 * p:
                continue
            lhs = 12 * counts[a + amax]  # 2 * count, in sixths
            rhs = (p - 1) * int(table.kronecker_sixths[4 * p - a * a])
            if lhs != rhs:
                ok = False
                _log(f"MASS FAIL p={p} a={a}: 2*count={lhs}/6 vs (p-1)*H={rhs}/6")
        print(f"p={p} {'OK' if ok else 'FAIL'}")
        all_ok = all_ok and ok
    return 0 if all_ok else 1


def _cmd_isogeny_count(args) -> int:
    methods = ["mine", "ito", "ogg", "oracle"] if args.all_methods else [args.method]
    values = {}
    for method in methods:
        try:
            if method == "mine":
                values[method] = isogeny.count_mine(args.a, args.f, args.p, args.M)
            elif method == "oracle":
                values[method] = isogeny.frobenius_subgroup_oracle(args.a, args.f, args.p, args.M)
            elif method == "ito":
                facs = isogeny._prime_power_factors(args.M)
                if len(facs) != 1:
                    raise ValueError("ito needs a prime-power M")
                l, qe = facs[0]
                eps = round(math.log(qe) / math.log(l))
                values[method] = isogeny.count_ito(args.a, args.f, args.p, l, eps)
            elif method == "ogg":
                if args.f != 1:
                    raise ValueError("ogg applies at f = 1 only")
                values[method] = isogeny.count_ogg(args.a, args.p, args.M)
        except ValueError as exc:
            if args.all_methods:
                _log(f"{method}: skipped ({exc})")
            else:
                raise
    for method, v in values.items():
        print(f"{method},{v}")
    if args.all_methods:
        consistent = len(set(values.values())) == 1
        print(f"verdict,{'CONSISTENT' if consistent else 'MISMATCH'}")
        return 0 if consistent else 1
    return 0


def _cmd_geometry(args) -> int:
    fam = parse_family(args.family)
    profile = geometry.disc_multiplicities(fam)
    print(f"multiset,{'+'.join(str(m) for m in profile.multiset)}")
    for fac in profile.factors:
        print(f"factor,{list(fac.factor)},multiplicity={fac.multiplicity},"
              f"multiplicative={fac.is_multiplicative}")
    print(f"semistable,{profile.semistable}")
    sing = geometry.fiber_square_singular_count(profile.multiset)
    print(f"sum_m_squared,{sing}")
    if args.mw_rank is not None:
        cfg = geometry.FiberConfiguration(args.mw_rank, profile.multiset)
        rank = geometry.shioda_tate_rank(cfg)
        print(f"shioda_tate_rank,{rank}")
        print(f"list2_divisor_count,{geometry.divisor_count_list2(rank, sing)}")
        if args.b and args.ranks:
            b = [int(t) for t in args.b.split(",")]
            ranks = [int(t) for t in args.ranks.split(",")]
            print(f"thm_e2_rhs,{geometry.thm_e2_rhs(len(b), b, ranks)}")
    return 0


class UsageError(ValueError):
    """Bad parameter combination; mapped to exit code 2."""


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="elltrace",
        description="Nagao sums, isogeny counts, class numbers and trace-formula checks "
                    "for elliptic fibrations over the affine t-line "
                    "(the fiber at t = infinity is always omitted).")
    ap.add_argument("--workers", type=int,
                    default=int(os.environ.get("ELLTRACE_WORKERS", "0")) or None,
                    help="worker threads (results are worker-count independent)")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, **kw)
        sp.add_argument("--out", choices=["csv", "json"], default="csv")
        sp.add_argument("--out-path", default="-")
        return sp

    sp = add("ap", help="per-fiber traces at one prime")
    sp.add_argument("--family", required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(func=_cmd_ap)

    sp = add("rank", help="Nagao rank sum S(F, X)")
    sp.add_argument("--family", required=True)
    sp.add_argument("--xmax", type=int, required=True)
    sp.set_defaults(func=_cmd_rank)

    sp = add("residue", help="a_p^n residue estimator for a family")
    sp.add_argument("--family", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--preset", choices=["thm-e2", "thm-modular"])
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--checkpoints", default="geometric:1.25")
    sp.add_argument("--checkpoint", help="checkpoint/restart file")
    sp.set_defaults(func=_cmd_residue)

    sp = add("weighted-residue", help="weighted moment estimator at level M")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--xmax", type=int, required=True)
    sp.add_argument("--checkpoints", default="geometric:1.25")
    sp.add_argument("--checkpoint")
    sp.set_defaults(func=_cmd_weighted_residue)

    sp = add("classnum", help="Hurwitz class-number table")
    sp.add_argument("--disc-max", type=int, required=True)
    sp.set_defaults(func=_cmd_classnum)

    sp = add("trace", help="trace of T_p on S_weight(Gamma_0(level))")
    sp.add_argument("--level", type=int, required=True)
    sp.add_argument("--weight", type=int, required=True)
    sp.add_argument("--prime-max", type=int, required=True)
    sp.set_defaults(func=_cmd_trace)

    sp = add("moment-check", help="verify the moment identity chain")
    sp.add_argument("--level", type=int, default=1)
    sp.add_argument("--n", default="2,4,6")
    sp.add_argument("--prime-max", type=int, default=199)
    sp.add_argument("--brute-max", type=int, default=199)
    sp.set_defaults(func=_cmd_moment_check)

    sp = add("mass-check", help="verify 2*#curves = (p-1)*H(4p-a^2)")
    sp.add_argument("--prime-max", type=int, default=199)
    sp.set_defaults(func=_cmd_mass_check)

    sp = add("isogeny-count", help="count rational cyclic M-subgroups")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", type=int, default=1)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--method", choices=["mine", "ito", "ogg", "oracle"], default="mine")
    sp.add_argument("--all-methods", action="store_true")
    sp.set_defaults(func=_cmd_isogeny_count)

    sp = add("geometry", help="discriminant multiplicities and rank bookkeeping")
    sp.add_argument("--family", required=True)
    sp.add_argument("--mw-rank", type=int)
    sp.add_argument("--b", help="comma list of b_j")
    sp.add_argument("--ranks", help="comma list of rank NS values")
    sp.set_defaults(func=_cmd_geometry)

    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.workers:
        effective = set_worker_threads(args.workers)
        if effective != args.workers:
            _log(f"workers clamped to {effective}")
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError) as exc:
        # covers FamilyParseError, BadPrimeError, checkpoint mismatches
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
