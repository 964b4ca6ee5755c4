"""Command-line driver: ``gfwigner <subcommand> [options]``.

Exit codes: 0 pass, 1 check failure, 2 usage error, 3 capability exceeded.
Summary lines go to stdout as ``key=value`` pairs; tables go to ``--out``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import CapabilityError, CheckFailure
from .field import MAX_QUBITS, default_cmap, make_field, parse_tuple, tuple_str

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# ------------------------------------------------------------------ helpers

def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"--n-range expects A..B, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def _out_dir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(**pairs) -> None:
    print(" ".join(f"{k}={v}" for k, v in pairs.items()))


def _load_net(args, n: int):
    from .net import all_plus_net, net_from_json, random_net

    if args.net_file:
        try:
            net = net_from_json(Path(args.net_file).read_text())
        except (OSError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read net file: {exc}") from None
        if net.n != n:
            raise UsageError(f"net file is for n={net.n}, not n={n}")
        return net, "file"
    cmap = default_cmap(n)
    if args.seed is not None:
        return random_net(cmap, args.seed), f"seed:{args.seed}"
    return all_plus_net(cmap), "all-plus"


def _read_amplitudes(path: Path) -> np.ndarray:
    if path.suffix == ".npy":
        return np.load(path).astype(complex).ravel()
    amps = []
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) == 2:
            amps.append(complex(float(parts[0]), float(parts[1])))
        elif len(parts) == 1:
            amps.append(complex(parts[0].replace("i", "j")))
        else:
            raise UsageError(f"cannot parse amplitude line {raw!r}")
    return np.array(amps, dtype=complex)


def parse_state(spec: str, n: int):
    """``comp:<bits>``, ``bell`` (n=2), ``ghz``, ``file:<path>`` or a path.

    Computational, Bell and GHZ states are returned in exact form.
    """
    from .wigner import ExactState

    d = 1 << n
    if spec.startswith("comp:"):
        try:
            k = parse_tuple(spec[5:], n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        re = np.zeros(d, dtype=np.int64)
        re[k] = 1
        return ExactState.from_ints(re)
    if spec in ("bell", "ghz"):
        if spec == "bell" and n != 2:
            raise UsageError("state 'bell' needs n=2 (use 'ghz' for other n)")
        re = np.zeros(d, dtype=np.int64)
        re[0] = re[d - 1] = 1
        return ExactState.from_ints(re)
    path = Path(spec[5:] if spec.startswith("file:") else spec)
    if not path.exists():
        raise UsageError(f"unknown state spec {spec!r}")
    try:
        amps = _read_amplitudes(path)
    except ValueError as exc:
        raise UsageError(f"bad state file: {exc}") from None
    if amps.shape != (d,):
        raise UsageError(f"state file has {amps.size} amplitudes, expected {d}")
    norm = np.linalg.norm(amps)
    if norm == 0:
        raise UsageError("state file amplitudes are all zero")
    return amps / norm


BELL_PATTERNS = {
    "corners": {Fraction(1, 4): 4, Fraction(0): 12},
    "negative-centre": {Fraction(1, 8): 12, Fraction(-1, 8): 4},
}


def bell_pattern(table) -> str:
    ms = table.value_multiset()
    for name, ref in BELL_PATTERNS.items():
        if ms == ref:
            return name
    return "other"


def striation_marginals(table) -> np.ndarray:
    """Line sums per striation, shape (d+1, d), indexed by intercept."""
    from .geometry import intercepts_array

    spec = table.cmap.spec
    d = spec.d
    els = np.asarray(spec.elements(), dtype=np.int64)
    q, p = np.meshgrid(els, els, indexing="ij")
    out = np.zeros((d + 1, d))
    for r in range(d + 1):
        lab = intercepts_array(spec, r, q.ravel(), p.ravel())
        out[r] = np.bincount(lab, weights=table.values.ravel(), minlength=d)
    return out


def wigner_axioms(net, state, table) -> dict:
    """Checks run by the wigner subcommand on the table it writes."""
    from .geometry import all_lines
    from .net import line_projector
    from .wigner import TOL, as_density, table_inner_product

    marg = striation_marginals(table)
    rho = as_density(state)
    res = {
        "total": float(table.values.sum()),
        "min_line_sum": float(marg.min()),
        "purity_from_table": table_inner_product(table, table),
        "purity": float(np.real(np.trace(rho @ rho))),
    }
    dev = abs(res["purity_from_table"] - res["purity"])
    dev = max(dev, float(np.max(np.abs(marg.sum(axis=1) - 1))))
    if net.n <= 4:
        spec = net.cmap.spec
        for line in all_lines(spec):
            tr = float(np.real(np.trace(rho @ line_projector(net, line))))
            dev = max(dev, abs(marg[line.striation, line.intercept] - tr))
    res["max_dev"] = dev
    res["ok"] = bool(dev <= TOL and res["min_line_sum"] >= -TOL)
    return res


# --------------------------------------------------------------- subcommands

def cmd_geometry(args) -> int:
    from .geometry import verify_geometry

    n = args.n
    t0 = time.perf_counter()
    rep = verify_geometry(make_field(n))
    rep["seconds"] = round(time.perf_counter() - t0, 3)
    _emit(striations=rep["striations"], lines=rep["lines"], incidence=rep["incidence"])
    out = _out_dir(args)
    if out:
        (out / f"geometry_n{n}.json").write_text(json.dumps(rep, indent=2) + "\n")
    return EXIT_OK


def cmd_wigner(args) -> int:
    from .net import net_to_json
    from .wigner import wigner_of_state

    n = args.n
    if n > 6:
        raise CapabilityError("the wigner subcommand supports n <= 6")
    net, origin = _load_net(args, n)
    state = parse_state(args.state, n)
    table = wigner_of_state(net, state)
    checks = wigner_axioms(net, state, table)
    pairs = {"n": n, "net": origin, "state": args.state, "exact": table.exact}
    if args.state == "bell":
        pairs["pattern"] = bell_pattern(table)
    pairs.update(total=repr(round(checks["total"], 12)), max_dev=f"{checks['max_dev']:.3g}",
                 axioms="OK" if checks["ok"] else "FAIL")
    _emit(**pairs)
    out = _out_dir(args)
    if out:
        stem = "wigner"
        if args.format == "json":
            (out / f"{stem}.json").write_text(table.to_json() + "\n")
        else:
            (out / f"{stem}.csv").write_text(table.to_csv())
        (out / "net.json").write_text(net_to_json(net) + "\n")
        if not args.no_plots:
            from .plotting import plot_table

            labels = ["0"] + ["1" if j == 0 else f"w{j}" for j in range(net.d - 1)]
            plot_table(table.values, out / f"{stem}.png", f"W, state {args.state}", labels)
    return EXIT_OK if checks["ok"] else EXIT_CHECK


def cmd_overlap_search(args) -> int:
    from .interference import overlap_search, overlap_search_nets, random_overlap_search
    from .net import enumerate_nets

    n = args.n
    cmap = default_cmap(n)
    if args.samples:
        checked, found = random_overlap_search(cmap, args.samples, args.seed or 0)
        _emit(n=n, mode="random", samples=checked, satisfying_nets=found)
        report = {"n": n, "mode": "random", "samples": checked, "satisfying": found}
    else:
        res = overlap_search(cmap)
        pairs = {"n": n, "patterns": res.patterns}
        report = {
            "n": n,
            "mode": "exhaustive",
            "patterns": res.patterns,
            "satisfying": res.satisfying,
            "per_m": {tuple_str(m, n): c for m, c in res.per_m.items()},
        }
        if n == 2:
            checked, full = overlap_search_nets(enumerate_nets(cmap))
            report.update(full_nets=checked, full_satisfying=full)
            pairs.update(full_nets=checked, full_satisfying=full)
        pairs["satisfying_nets"] = res.satisfying + report.get("full_satisfying", 0)
        _emit(**pairs)
        found = pairs["satisfying_nets"]
    out = _out_dir(args)
    if out:
        (out / f"overlap_n{n}.json").write_text(json.dumps(report, indent=2) + "\n")
    return EXIT_OK


def cmd_interference_stats(args) -> int:
    from .interference import (
        aggregates_csv,
        aggregates_ri_csv,
        fit_exponential,
        records_csv,
        run_average_experiment,
    )

    if args.seed is None:
        raise UsageError("interference-stats needs --seed")
    lo, hi = _parse_range(args.n_range or ("2..10" if args.extended else "2..8"))
    if lo < 1 or hi > MAX_QUBITS:
        raise CapabilityError(f"n range must lie in 1..{MAX_QUBITS}")
    if args.nets < 1:
        raise UsageError("--nets must be positive")
    records, aggs = run_average_experiment(lo, hi, args.nets, args.seed, threads=args.threads)
    agg_text = aggregates_csv(aggs)
    sys.stdout.write(agg_text)
    fit = None
    if len(aggs) >= 3:
        fit = fit_exponential([(a.n, a.mean_ratio) for a in aggs])
        _emit(fit_slope=repr(fit.slope), fit_intercept=repr(fit.intercept),
              r_squared=repr(fit.r_squared), points=fit.points)
    out = _out_dir(args)
    if out:
        from .plotting import write_dat

        (out / "records.csv").write_text(records_csv(records))
        (out / "aggregates.csv").write_text(agg_text)
        (out / "aggregates_ri.csv").write_text(aggregates_ri_csv(aggs))
        ns = [a.n for a in aggs]
        write_dat(out / "decay.dat", ns, [a.mean_ratio for a in aggs], "n mean_ratio")
        write_dat(out / "entropy.dat", ns, [a.mean_entropy for a in aggs], "n mean_entropy")
        if fit is not None:
            (out / "fit.json").write_text(json.dumps(fit.__dict__, indent=2) + "\n")
        if not args.no_plots:
            from .plotting import plot_decay, plot_entropy

            plot_decay(ns, [a.mean_ratio for a in aggs], [a.mean_dev_ratio for a in aggs], fit, out / "decay.png")
            plot_entropy(ns, [a.mean_entropy for a in aggs], [a.mean_dev_entropy for a in aggs], out / "entropy.png")
    return EXIT_OK


def _parse_p_index(text: str) -> int:
    from .code5 import D, N

    t = text.strip()
    if len(t) == N and set(t) <= {"0", "1"}:
        return int(t, 2)
    try:
        v = int(t, 0)
    except ValueError:
        raise UsageError(f"--p-index expects a 5-bit tuple like 10000, got {text!r}") from None
    if not 0 <= v < D:
        raise UsageError("--p-index out of range")
    return v


def cmd_code5(args) -> int:
    from .code5 import build_code_frame, code_net_for, code_report, code_wigner

    p_i = _parse_p_index(args.p_index)
    rep = code_report(p_i, seed=args.seed or 0)
    syn = rep["syndromes"]
    ok = (
        all(rep["frame_checks"].values())
        and syn["distinct"]
        and syn["orthogonal"]
        and rep["plus_formula_max_dev"] <= 1e-10
    )
    _emit(
        p_I=rep["p_I"],
        offsets=len(syn["offsets"]),
        distinct="yes" if syn["distinct"] else "no",
        degeneracy_classes=syn["degeneracy_classes"],
        gram_max_offdiag=f"{syn['gram_max_offdiag']:.3g}",
        overlaps_logical_lines="yes" if rep["interference_overlaps_logical_lines"] else "no",
        checks="OK" if ok else "FAIL",
    )
    out = _out_dir(args)
    if out:
        (out / "code5.json").write_text(json.dumps(rep, indent=2) + "\n")
        if not args.no_plots:
            from .plotting import plot_table

            frame = build_code_frame()
            net = code_net_for(p_i, frame)
            for name, vec in (
                ("zero_L", frame.zero_l),
                ("one_L", frame.one_l),
                ("plus_L", frame.encode(2 ** -0.5, 2 ** -0.5)),
            ):
                plot_table(code_wigner(net, vec, frame).by_tuple(), out / f"code5_{name}.png", f"W' {name}")
    return EXIT_OK if ok else EXIT_CHECK


# ---------------------------------------------------------------- selftests

def _check(label: str, cond: bool, failures: list[str]) -> None:
    print(f"  {'ok  ' if cond else 'FAIL'} {label}")
    if not cond:
        failures.append(label)


def selftest_geometry(failures: list[str]) -> None:
    from .geometry import verify_geometry

    for n in range(1, 7):
        rep = verify_geometry(make_field(n))
        _check(f"geometry n={n}", rep["lines"] == (1 << n) * ((1 << n) + 1), failures)
    for n in (7, 8):
        _check(f"geometry n={n} (algebraic)", verify_geometry(make_field(n))["incidence"] == "OK", failures)


def selftest_wigner(failures: list[str]) -> None:
    from .net import random_net
    from .wigner import TOL, covariance_check, dense_wigner, random_pure_state, wigner_of_state

    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        cmap = default_cmap(n)
        net = random_net(cmap, n)
        psi = random_pure_state(cmap.d, rng)
        table = wigner_of_state(net, psi)
        _check(f"fast vs dense n={n}", np.max(np.abs(table.values - dense_wigner(net, psi))) <= TOL, failures)
        _check(f"line sums n={n}", wigner_axioms(net, psi, table)["ok"], failures)
        delta = (cmap.spec.generator, 1)
        _check(f"covariance n={n}", covariance_check(net, psi, delta) <= TOL, failures)


def selftest_overlap(failures: list[str]) -> None:
    from .interference import overlap_search

    res = overlap_search(default_cmap(2))
    _check("n=2 no overlap-avoiding net", res.satisfying == 0, failures)
    _check("n=2 each single m solvable", all(c > 0 for c in res.per_m.values()), failures)


def selftest_interference(failures: list[str]) -> None:
    from .interference import interference_profile, localized_net_for, profile_direct
    from .net import random_net

    for n in (2, 3, 4):
        cmap = default_cmap(n)
        net = random_net(cmap, 11 * n)
        ok = True
        for m in range(1, cmap.d):
            prof = interference_profile(net, m)
            re, im = profile_direct(net, m)
            ok &= np.array_equal(prof.re_num, re) and np.array_equal(prof.im_num, im)
        _check(f"FWHT equals direct sum n={n}", ok, failures)
        m, q_i = cmap.d - 1, 1
        prof = interference_profile(localized_net_for(cmap, m, q_i), m)
        _check(f"localised profile n={n}", prof.support() == sorted({q_i, q_i ^ m}), failures)


def selftest_code5(failures: list[str]) -> None:
    from .code5 import build_code_frame, frame_checks, syndrome_analysis

    frame = build_code_frame()
    for k, v in frame_checks(frame).items():
        _check(f"frame {k}", v, failures)
    syn = syndrome_analysis(frame)
    _check("15 distinct syndromes", syn["distinct"] and len(syn["offsets"]) == 15, failures)
    _check("error images orthogonal", syn["orthogonal"], failures)
    _check("degeneracy detected", syn["degeneracy_classes"] == 1, failures)


SELFTESTS = {
    "geometry": [selftest_geometry],
    "wigner": [selftest_wigner],
    "overlap-search": [selftest_overlap],
    "interference-stats": [selftest_interference],
    "code5": [selftest_code5],
}


def run_selftest(command: str) -> int:
    failures: list[str] = []
    print(f"selftest {command}")
    for fn in SELFTESTS[command]:
        fn(failures)
    _emit(selftest="OK" if not failures else "FAIL", failures=len(failures))
    return EXIT_OK if not failures else EXIT_CHECK


# ------------------------------------------------------------------- parser

def _n_arg(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("n must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="directory for tables, data files and figures")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, help="master seed for randomised runs")
    common.add_argument("--threads", type=int, default=1, help="worker processes (results do not depend on it)")
    common.add_argument("--selftest", action="store_true", help="run the invariant suite for this subcommand")
    common.add_argument("--no-plots", action="store_true", help="skip PNG rendering")

    parser = argparse.ArgumentParser(prog="gfwigner", description="Discrete Wigner functions over GF(2^n).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geometry", parents=[common], help="verify the phase-space incidence structure")
    p.add_argument("--n", type=_n_arg, default=2)
    p.set_defaults(func=cmd_geometry)

    p = sub.add_parser("wigner", parents=[common], help="Wigner table of a state for one net")
    p.add_argument("--n", type=_n_arg, default=2)
    p.add_argument("--state", default="comp:00", help="comp:<bits>, bell, ghz, file:<path>")
    p.add_argument("--net-file", help="JSON net (otherwise --seed draws one, default all-plus)")
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("overlap-search", parents=[common], help="search for nets avoiding the overlap")
    p.add_argument("--n", type=_n_arg, default=2)
    p.add_argument("--samples", type=int, default=0, help="random search with this many nets (any n)")
    p.set_defaults(func=cmd_overlap_search)

    p = sub.add_parser("interference-stats", parents=[common], help="random-net interference statistics")
    p.add_argument("--n-range", help="A..B (default 2..8)")
    p.add_argument("--nets", type=int, default=50, help="random nets per n")
    p.add_argument("--extended", action="store_true", help="default range 2..10")
    p.set_defaults(func=cmd_interference_stats)

    p = sub.add_parser("code5", parents=[common], help="five-qubit code in phase space")
    p.add_argument("--p-index", default="10000", help="momentum tuple p_I of the interference lines")
    p.set_defaults(func=cmd_code5)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads < 1:
        parser.error("--threads must be at least 1")
    n = getattr(args, "n", None)
    if n is not None and n > MAX_QUBITS:
        print(f"capability exceeded: n={n} is above the supported maximum {MAX_QUBITS}", file=sys.stderr)
        return EXIT_CAPABILITY
    try:
        if args.selftest:
            return run_selftest(args.command)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        print(f"capability exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
