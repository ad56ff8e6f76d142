"""Command-line surface.

Every subcommand is a thin shell over one library call; the numbers printed
are the library results unmodified.  Exit codes: 0 for a completed analysis
(whatever the verdict), 1 for parse or validation problems, 2 for numerical
failures, 3 when the input is not a channel.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .channels import ChannelMatrix, determinant
from .decision import Verdict, markovian_check
from .errors import (
    BranchLengthMismatch,
    DimensionMismatch,
    InvalidForm,
    MarkovscopeError,
    NotAChannel,
    NotASquareOfSquare,
    NotHermiticityPreserving,
    NotQubit,
    ParseError,
    RangeError,
    UnsupportedBasis,
)
from .io import (
    channel_to_dict,
    load_channel,
    report_to_dict,
    spectral_to_dict,
    td_report_to_dict,
)
from .qubit import td_markovian_check
from .spectral import BranchIndex, eigendecompose, fractional_power
from .zoo import (
    JCParams,
    dephasing_channel,
    figure2a_mixture,
    jc_channel,
    rabi_unitary,
    random_channel,
    transpose_approximation,
)

_VALIDATION_ERRORS = (
    ParseError,
    DimensionMismatch,
    NotASquareOfSquare,
    UnsupportedBasis,
    RangeError,
    NotQubit,
    InvalidForm,
    BranchLengthMismatch,
)


def _exit_code(exc: MarkovscopeError) -> int:
    if isinstance(exc, _VALIDATION_ERRORS):
        return 1
    if isinstance(exc, (NotAChannel, NotHermiticityPreserving)):
        return 3
    return 2


def _model_dephasing(t: float = 1.0) -> ChannelMatrix:
    return dephasing_channel(t)


def _model_rabi(theta: float = np.pi / 4) -> ChannelMatrix:
    return rabi_unitary(theta)


def _model_figure2a(p: float = 0.5) -> ChannelMatrix:
    return figure2a_mixture(p)


def _model_jc(
    t: float = 1.0,
    omega: float = 0.2,
    gamma: float = 0.35,
    alpha_x: float = 0.5,
    alpha_y: float = 1.0,
    alpha_z: float = 0.5,
) -> ChannelMatrix:
    return jc_channel(
        t,
        JCParams(omega=omega, gamma=gamma, alpha_x=alpha_x, alpha_y=alpha_y, alpha_z=alpha_z),
    )


def _model_transpose_approx() -> ChannelMatrix:
    return transpose_approximation()


MODELS = {
    "dephasing": _model_dephasing,
    "rabi": _model_rabi,
    "figure2a": _model_figure2a,
    "jc": _model_jc,
    "transpose_approx": _model_transpose_approx,
}

_DEFAULT_SWEEP = {"dephasing": "t", "rabi": "theta", "figure2a": "p", "jc": "t"}


def _parse_params(items: list[str]) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise ParseError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError as exc:
            raise ParseError(f"--param {key}: {value!r} is not a number") from exc
    return out


def _build_model(name: str, params: dict[str, float]) -> ChannelMatrix:
    try:
        builder = MODELS[name]
    except KeyError as exc:
        raise ParseError(f"unknown model {name!r}; choices: {', '.join(sorted(MODELS))}") from exc
    try:
        return builder(**params)
    except TypeError as exc:
        raise ParseError(f"bad parameters for model {name!r}: {exc}") from exc


def _load_input(args) -> ChannelMatrix:
    if args.model is not None:
        return _build_model(args.model, _parse_params(args.param))
    if args.file is not None:
        return load_channel(args.file)
    raise ParseError("provide a channel file or --model NAME")


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.12g}"


def cmd_check(args) -> int:
    T = _load_input(args)
    report = markovian_check(T, m_max=args.m_max, tol=args.tol)
    payload = report_to_dict(report)
    spectrum = None
    if args.dump_spectrum:
        try:
            spectrum = spectral_to_dict(eigendecompose(T))
        except MarkovscopeError as exc:
            spectrum = {"error": str(exc)}
        payload["spectrum"] = spectrum
    if args.json:
        print(json.dumps(payload, indent=2))
        return 0
    print(f"verdict: {report.verdict.value}")
    print(f"measure: {_fmt(report.measure)}")
    print(f"mu_min: {_fmt(report.mu_min)}")
    if report.witness_branch is not None:
        print(f"witness branch: {list(report.witness_branch.m)}")
    print(f"diagnostics: {report.diagnostics}")
    if spectrum is not None and "clusters" in spectrum:
        for k, c in enumerate(spectrum["clusters"]):
            re, im = c["value"]
            print(
                f"cluster {k}: value = {re:+.9g}{im:+.9g}j, "
                f"multiplicity = {c['multiplicity']}, kind = {c['kind']}"
            )
        if spectrum["pairs"]:
            print(f"conjugate pairs: {spectrum['pairs']}")
    elif spectrum is not None:
        print(f"spectrum unavailable: {spectrum['error']}")
    return 0


def cmd_measure(args) -> int:
    T = _load_input(args)
    report = markovian_check(T, m_max=args.m_max, tol=args.tol)
    if args.json:
        print(json.dumps(report_to_dict(report), indent=2))
        return 0
    print(f"measure: {_fmt(report.measure)}")
    print(f"mu_min: {_fmt(report.mu_min)}")
    return 0


def cmd_tdcheck(args) -> int:
    T = _load_input(args)
    report = td_markovian_check(T)
    if args.json:
        print(json.dumps(td_report_to_dict(report), indent=2))
        return 0
    print(f"td_markovian: {'true' if report.td_markovian else 'false'}")
    print(f"s: {' '.join(_fmt(x) for x in report.s.s)}")
    print(f"det: {_fmt(report.s.det_T)}")
    return 0


def _scan_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0:
        raise ParseError(f"--step must be positive, got {step}")
    if start > stop:
        raise ParseError(f"--start {start} exceeds --stop {stop}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def cmd_scan(args) -> int:
    fixed = _parse_params(args.param)
    sweep = args.sweep or _DEFAULT_SWEEP.get(args.model)
    if sweep is None:
        raise ParseError(f"model {args.model!r} has no sweep parameter; pass --sweep")
    lines = ["param,markovian,mu_min,measure,td_markovian,det"]
    for value in _scan_grid(args.start, args.stop, args.step):
        T = _build_model(args.model, {**fixed, sweep: value})
        report = markovian_check(T, m_max=args.m_max)
        td = td_markovian_check(T)
        det = determinant(T)
        lines.append(
            f"{value:.10g},{1 if report.verdict is Verdict.MARKOVIAN else 0},"
            f"{_fmt(report.mu_min)},{_fmt(report.measure)},"
            f"{1 if td.td_markovian else 0},{_fmt(det)}"
        )
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def sample_fractions(d: int, n: int, seed: int, threads: int = 1) -> dict:
    """Monte Carlo fractions of Markovian and TD-Markovian channels.

    Each sample gets its own child seed from one seed sequence, so the result
    depends only on (d, n, seed), not on the thread count.
    """
    if n < 1:
        raise RangeError(f"need at least one sample, got n = {n}")
    child_seeds = np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)

    def one(s: int) -> tuple[bool, bool | None]:
        T = random_channel(d, int(s))
        mk = markovian_check(T).verdict is Verdict.MARKOVIAN
        td = td_markovian_check(T).td_markovian if d == 2 else None
        return mk, td

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, child_seeds))
    else:
        results = [one(s) for s in child_seeds]

    n_mk = sum(1 for mk, _ in results if mk)
    if d == 2:
        n_td = sum(1 for _, td in results if td)
        n_mk_not_td = sum(1 for mk, td in results if mk and not td)
        td_frac, mk_not_td_frac = n_td / n, n_mk_not_td / n
    else:
        td_frac = mk_not_td_frac = None
    return {
        "schema": 1,
        "d": d,
        "n": n,
        "seed": seed,
        "fraction_markovian": n_mk / n,
        "fraction_td_markovian": td_frac,
        "fraction_markovian_and_not_td": mk_not_td_frac,
    }


def cmd_sample(args) -> int:
    summary = sample_fractions(args.d, args.n, args.seed, threads=args.threads)
    print(json.dumps(summary, indent=2))
    return 0


def cmd_power(args) -> int:
    T = _load_input(args)
    m = BranchIndex(tuple(args.branch)) if args.branch is not None else None
    out = fractional_power(T, args.s, m=m)
    text = json.dumps(channel_to_dict(out))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _add_input_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("file", nargs="?", help="channel JSON file")
    sp.add_argument("--model", choices=sorted(MODELS), help="built-in model instead of a file")
    sp.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="model parameter (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovscope",
        description="Decide and quantify Markovianity of quantum channels from a single snapshot.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="Markovianity verdict for a channel")
    _add_input_args(p)
    p.add_argument("--m-max", dest="m_max", type=int, default=2, help="branch search box (default 2)")
    p.add_argument("--tol", type=float, default=None, help="override the Markovianity tolerance")
    p.add_argument("--dump-spectrum", action="store_true", help="include the eigenvalue clusters")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("measure", help="Markovianity measure and mu_min")
    _add_input_args(p)
    p.add_argument("--m-max", dest="m_max", type=int, default=2)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("tdcheck", help="qubit time-dependent-Markovianity criterion")
    _add_input_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_tdcheck)

    p = sub.add_parser("scan", help="sweep a model parameter, emit CSV")
    p.add_argument("--model", required=True, choices=sorted(MODELS))
    p.add_argument("--sweep", help="parameter to sweep (default depends on model)")
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--m-max", dest="m_max", type=int, default=2)
    p.add_argument(
        "--param", action="append", default=[], metavar="KEY=VALUE", help="fixed parameters"
    )
    p.add_argument("--output", "-o", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("sample", help="Monte Carlo fractions over random channels")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("power", help="fractional power of a channel on a chosen branch")
    _add_input_args(p)
    p.add_argument("--s", type=float, required=True, help="exponent")
    p.add_argument(
        "--branch", type=int, nargs="*", default=None, help="winding numbers, one per complex pair"
    )
    p.add_argument("--output", "-o", help="output JSON path (default stdout)")
    p.set_defaults(func=cmd_power)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MarkovscopeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
