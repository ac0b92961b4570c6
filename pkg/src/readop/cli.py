"""Command-line interface: ``readop params|order|op|verify|cyclic``.

Exit codes: 0 success, 1 verification failure, 2 horizon, 3 usage or parse error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from importlib import resources
from pathlib import Path

from . import params_io
from .cyclicity import cyclic_certificate
from .errors import (
    FormatError,
    HorizonExceeded,
    ReadopError,
    SearchBudgetExhausted,
    Unresolved,
)
from .figure import path_csv, path_svg
from .operator import STRICT, TOY, OperatorModel
from .ordering import PathGeometry, path_prefix, validate_b
from .scalar import Scalar
from .stages import (
    SamplerConfig,
    SearchConfig,
    check_conditions,
    estimate_D,
    extend_stage,
    toy_model,
)
from .suites import SUITES, Ranges, render_report, run_verification_suite
from .vectors import Coord, SparseVector, add_into, rankmap_from_text, rankmap_to_text

EXIT_OK, EXIT_FAIL, EXIT_HORIZON, EXIT_USAGE = 0, 1, 2, 3
PARAMS_ENV = "READOP_PARAMS"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def packaged_params(mode: str) -> str:
    return (resources.files("readop") / "data" / f"{mode}.params").read_text(encoding="utf-8")


def _load_params(args, mode: str | None = None) -> tuple[params_io.ParameterFile, str]:
    """Explicit --params, then $READOP_PARAMS, then the packaged fixture for the mode."""
    path = getattr(args, "params", None) or (None if mode == TOY else os.environ.get(PARAMS_ENV))
    text = Path(path).read_text(encoding="utf-8") if path else packaged_params(mode or STRICT)
    pf = params_io.loads(text)
    if mode and pf.model.mode != mode:
        raise FormatError(f"parameter file is in {pf.model.mode} mode, {mode} was requested")
    return pf, params_io.text_hash(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_b(text: str) -> tuple[int, ...]:
    try:
        return validate_b([int(t) for t in text.split(",") if t.strip()])
    except ValueError as exc:
        raise FormatError(f"bad --b {text!r}: {exc}") from exc


# -- params ---------------------------------------------------------------


def cmd_params(args) -> int:
    sampler = SamplerConfig(seed=args.seed, mixtures=args.mixtures)
    search = SearchConfig(scan_limit=args.scan_limit)
    progress = (lambda msg: print(msg, file=sys.stderr, flush=True)) if not args.quiet else None
    if args.action == "build":
        if args.mode == TOY:
            model = toy_model()
            pf = params_io.ParameterFile(model, sampler_seed=args.seed)
        else:
            model, report = extend_stage(None, search)
            est = estimate_D(0, model, sampler)
            model = model.with_stage_D(0, est.D, est.samples)
            if progress:
                progress(f"stage 0: a={model.last.a} D={est.D} from {est.samples} samples")
            pf = params_io.ParameterFile(model, {0: report}, args.seed)
        text = params_io.dumps(pf)
        _emit(text, args.output)
        return EXIT_OK
    if not args.file:
        raise FormatError(f"params {args.action} needs a parameter file")
    pf = params_io.load(args.file)
    if args.action == "extend":
        if pf.model.mode != STRICT:
            raise FormatError("only strict parameter files can be extended by search")
        if progress:
            progress(f"searching stage {len(pf.model.stages)} (b, then a)")
        model, report = extend_stage(pf.model, search)
        n = model.last.n
        est = estimate_D(n, model, sampler)
        model = model.with_stage_D(n, est.D, est.samples)
        if progress:
            st = model.last
            progress(f"stage {n}: b={st.b} s={st.s} a={st.a} D={est.D} from {est.samples} samples")
        reports = dict(pf.reports)
        reports[n] = report
        out = params_io.ParameterFile(model, reports, pf.sampler_seed)
        _emit(params_io.dumps(out), args.output or args.file)
        return EXIT_OK
    if args.action == "show":
        sys.stdout.write(params_io.dumps(pf))
        return EXIT_OK
    # check: recompute every report from the parameters alone
    lines = [f"params_sha256 = {params_io.file_hash(args.file)}", f"mode = {pf.model.mode}"]
    failed = []
    for st in pf.model.stages:
        rep = check_conditions(pf.model, st.n)
        lines += rep.lines()
        failed += [f"stage {st.n}: {cid}" for cid in rep.failed()]
    lines.append("failed conditions: " + (", ".join(failed) if failed else "none"))
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_FAIL if failed else EXIT_OK


# -- order ----------------------------------------------------------------


def cmd_order(args) -> int:
    b = _parse_b(args.b) if args.b else _load_params(args)[0].model.geometry.b
    geom = PathGeometry.build(b)
    if args.action == "rank":
        if len(args.values) != 1:
            raise FormatError("order rank takes one rank")
        print(geom.rank_to_coord(int(args.values[0])))
    elif args.action == "coord":
        if len(args.values) != 2:
            raise FormatError("order coord takes i and j")
        print(geom.coord_to_rank(Coord(int(args.values[0]), int(args.values[1]))))
    else:
        coords = path_prefix(args.count, b)
        text = path_csv(coords) if args.action == "path" else path_svg(coords, b=b)
        _emit(text, args.output)
    return EXIT_OK


# -- op -------------------------------------------------------------------


def _read_vector(path: str) -> SparseVector:
    return SparseVector.from_text(Path(path).read_text(encoding="utf-8"))


def cmd_op(args) -> int:
    model = _load_params(args)[0].model
    if args.action == "alpha":
        print(model.alpha(int(args.input)))
        return EXIT_OK
    if args.action == "gamma":
        text = Path(args.input).read_text(encoding="utf-8")
        if args.inverse:
            out = model.from_ranks(model.from_gamma_ranks(rankmap_from_text(text))).to_text()
        else:
            out = rankmap_to_text(model.to_gamma_ranks(model.to_ranks(SparseVector.from_text(text))))
        _emit(out, args.output)
        return EXIT_OK
    x = model.to_ranks(_read_vector(args.input))
    y = model.apply_ranks(x) if args.action == "apply" else model.power_ranks(args.k, x)
    _emit(model.from_ranks(y).to_text(), args.output)
    return EXIT_OK


# -- verify ---------------------------------------------------------------


def cmd_verify(args) -> int:
    pf, digest = _load_params(args, args.mode)
    ranges = Ranges(jmax=args.jmax, Nmax=args.Nmax, samples=args.samples, seed=args.seed)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        if not args.quiet:
            print(f"running {name}", file=sys.stderr, flush=True)
        results.append(run_verification_suite(name, pf.model, ranges))
    _emit(render_report(results, pf.model, ranges, digest), args.output)
    if args.output:
        for r in results:
            print(r.lines()[-1])
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


# -- cyclic ---------------------------------------------------------------


def random_head_vector(model: OperatorModel, seed: int, support_below: int, terms: int = 4) -> SparseVector:
    """Deterministic non-zero vector with small rational entries on ranks < support_below."""
    if support_below < 1:
        raise FormatError("--support-below must be positive")
    rng = random.Random(seed)
    x: dict = {}
    while not x:
        for _ in range(rng.randint(1, terms)):
            add_into(x, rng.randrange(support_below), Scalar(rng.randint(-9, 9)) / rng.randint(1, 9))
    return model.from_ranks(x)


def cmd_cyclic(args) -> int:
    pf, digest = _load_params(args)
    model = pf.model
    if args.input == "random":
        below = args.support_below if args.support_below is not None else model.stages[0].pos_a
        x = random_head_vector(model, args.seed, below)
        source = f"random seed={args.seed} support_below={below}"
    else:
        x = _read_vector(args.input)
        source = args.input
    rep = cyclic_certificate(x, args.N, model)
    lines = ["# readop-certificate v1", f"params_sha256 = {digest}", f"source = {source}", "x:"]
    lines += x.to_text().splitlines()[1:]
    lines += rep.lines()
    _emit("\n".join(lines) + "\n", args.output)
    if args.output:
        print(f"final_norm = {rep.final_norm}  verdict = {'PASS' if rep.passed else 'FAIL'}")
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- entry point ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="readop", description=__doc__.splitlines()[0])
    p.add_argument("--params", help=f"parameter file (default: ${PARAMS_ENV} or the packaged strict fixture)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("params", help="build, extend, show or check parameter files")
    s.add_argument("action", choices=["build", "extend", "show", "check"])
    s.add_argument("file", nargs="?")
    s.add_argument("--mode", choices=[STRICT, TOY], default=STRICT)
    s.add_argument("-o", "--output")
    s.add_argument("--seed", type=int, default=1729, help="sampler seed for the D estimate")
    s.add_argument("--mixtures", type=int, default=SamplerConfig.mixtures)
    s.add_argument("--scan-limit", type=int, default=SearchConfig.scan_limit)
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("order", help="ordering: rank to coord, coord to rank, path CSV, SVG figure")
    s.add_argument("action", choices=["rank", "coord", "path", "figure"])
    s.add_argument("values", nargs="*")
    s.add_argument("--b", help="comma-separated rows b_n (default: from the parameter file)")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_order)

    s = sub.add_parser("op", help="apply T, powers, weights alpha_j, gamma coordinates")
    s.add_argument("action", choices=["apply", "power", "alpha", "gamma"])
    s.add_argument("input", help="vector file (rank map file for gamma --inverse; rank for alpha)")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--inverse", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_op)

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("suite", choices=[*SUITES, "all"])
    s.add_argument("--mode", choices=[STRICT, TOY])
    s.add_argument("--jmax", type=int, default=Ranges.jmax)
    s.add_argument("--Nmax", type=int, default=Ranges.Nmax)
    s.add_argument("--samples", type=int, default=Ranges.samples)
    s.add_argument("--seed", type=int, default=Ranges.seed)
    s.add_argument("-o", "--output")
    s.add_argument("--quiet", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("cyclic", help="cyclicity certificate |Q(T)x - e_0|_N <= 4")
    s.add_argument("input", help="vector file, or 'random'")
    s.add_argument("--N", type=int, default=0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--support-below", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_cyclic)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (HorizonExceeded, Unresolved) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_HORIZON
    except (FormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchBudgetExhausted as exc:
        print(f"error: condition {exc.condition}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ReadopError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
