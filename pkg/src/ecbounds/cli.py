"""Command-line interface.

Exit codes: 0 success, 1 a verification suite found a violation, 2 usage or
domain error, 3 resource or precision error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .bounds import QuantityPreset, cb, cb_opt, params_for
from .errors import DomainError, PrecisionError, ResourceError, ValidationError
from .spectrum import Oscillator, SpectrumModel, load_spectrum
from .thermo import Envelope, OscillatorEnvelope, StarEnvelope, f_max
from .ufa import CapacityKind, reproduce_tables, rows_to_csv, rows_to_json, sufficient_dim

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _num(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            return None
        return float(format(x, ".12g"))
    if isinstance(x, dict):
        return {k: _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_num(v) for v in x]
    return x


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj, out=None):
    _emit(json.dumps(_num(obj)), out)


def _model_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--modes", help="comma-separated mode energies hbar*omega_i")
    g.add_argument("--spectrum", help="spectrum file with a '# complete_below=' header")


def _resolve_model(args) -> tuple[SpectrumModel, Envelope]:
    if args.modes is not None:
        try:
            energies = [float(x) for x in args.modes.split(",") if x.strip()]
        except ValueError as exc:
            raise _UsageError(f"bad --modes value {args.modes!r}") from exc
        model = Oscillator(energies)
        return model, OscillatorEnvelope(model)
    model = load_spectrum(args.spectrum)
    return model, StarEnvelope(model)


def _resolve_eps(args, model) -> float:
    if (args.eps is None) == (args.rel_err is None):
        raise _UsageError("give exactly one of --eps and --rel-err")
    if args.eps is not None:
        return args.eps
    return args.rel_err * f_max(model, args.energy).F


def cmd_fmax(args) -> int:
    model, _ = _resolve_model(args)
    gp = f_max(model, args.energy)
    _dump({"E": gp.E, "lambda": gp.lam, "lnZ": gp.lnZ, "F": gp.F}, args.out)
    return EXIT_OK


def cmd_bound(args) -> int:
    model, fhat = _resolve_model(args)
    eps = _resolve_eps(args, model)
    if not eps > 0:
        raise DomainError("eps must be positive")
    preset = QuantityPreset.from_label(args.kind)
    params = params_for(preset, fhat)
    ebar = args.energy - model.ground_energy
    if args.t is not None:
        t_star, value = args.t, cb(fhat, None, ebar, eps, args.t, params)
    else:
        t_star, value = cb_opt(fhat, None, ebar, eps, params, points=args.tgrid)
    _dump({"kind": preset.label, "E": args.energy, "eps": eps, "C": params.C, "D": params.D,
           "delta": params.delta, "t_star": t_star, "value": value}, args.out)
    return EXIT_OK


def cmd_ufa(args) -> int:
    model, fhat = _resolve_model(args)
    eps = _resolve_eps(args, model)
    kind = CapacityKind.parse(args.kind)
    res = sufficient_dim(kind, model, fhat, args.energy, eps)
    _dump({"kind": kind.value, "E": args.energy, "eps": eps, "m": res.m,
           "t_star": res.t_star, "f_value": res.f_value, "E_m": res.E_m}, args.out)
    return EXIT_OK


def cmd_tables(args) -> int:
    rows = reproduce_tables(energy_reading=args.energy_reading, workers=args.workers)
    _emit(rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify.suites import SuiteConfig, run_suite

    cfg = SuiteConfig(suites=tuple(args.suite), trials=args.trials, seed=args.seed,
                      dim=args.dim, workers=args.workers)
    reports = run_suite(cfg)
    _dump([r.to_dict() for r in reports], args.out)
    return EXIT_VIOLATION if any(r.violations for r in reports) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    from .verify.suites import DEFAULT_DIM, DEFAULT_SEED, DEFAULT_TRIALS

    p = _Parser(prog="ecbounds", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fmax", help="maximal entropy F(E) and Gibbs parameters")
    _model_args(f)
    f.add_argument("--energy", type=float, required=True)
    f.add_argument("--out")
    f.set_defaults(func=cmd_fmax)

    b = sub.add_parser("bound", help="continuity bound CB_t for an entropic quantity")
    _model_args(b)
    b.add_argument("--energy", type=float, required=True, help="mean-energy cap E")
    b.add_argument("--eps", type=float)
    b.add_argument("--rel-err", type=float)
    b.add_argument("--kind", default="entropy",
                   choices=[q.label for q in QuantityPreset])
    tg = b.add_mutually_exclusive_group()
    tg.add_argument("--t", type=float, help="evaluate at a fixed t")
    tg.add_argument("--optimize-t", action="store_true", help="minimise over t (default)")
    b.add_argument("--tgrid", type=int, default=256)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bound)

    u = sub.add_parser("ufa", help="eps-sufficient input dimension for a capacity")
    _model_args(u)
    u.add_argument("--energy", type=float, required=True)
    u.add_argument("--eps", type=float)
    u.add_argument("--rel-err", type=float)
    u.add_argument("--kind", default="Cchi", choices=[k.value for k in CapacityKind])
    u.add_argument("--out")
    u.set_defaults(func=cmd_ufa)

    t = sub.add_parser("tables", help="sufficient dimensions for the one-mode oscillator tables")
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.add_argument("--energy-reading", choices=["excitation", "total"], default="excitation")
    t.add_argument("--workers", type=int, default=1)
    t.add_argument("--out")
    t.set_defaults(func=cmd_tables)

    v = sub.add_parser("verify", help="randomised inequality suites")
    v.add_argument("--suite", action="append", default=None,
                   help="suite name or 'all' (repeatable)")
    v.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--dim", type=int, default=DEFAULT_DIM)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "suite", "x") is None:
            args.suite = ["all"]
        return args.func(args)
    except _UsageError as exc:
        sys.stderr.write(f"ecbounds: usage error: {exc}\n")
        return EXIT_USAGE
    except (DomainError, ValidationError) as exc:
        sys.stderr.write(f"ecbounds: {exc}\n")
        return EXIT_USAGE
    except (ResourceError, PrecisionError) as exc:
        sys.stderr.write(f"ecbounds: {exc}\n")
        return EXIT_RESOURCE
    except OSError as exc:
        sys.stderr.write(f"ecbounds: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
