"""Deterministic batch front end.

Every experiment in the package is reachable as a subcommand; all
numeric flags are exact rationals written ``num/den`` (no floats
anywhere on the command line), and the same config always produces
byte-identical output.  Reports are emitted as sorted-key JSON or as
flat tab-separated key/value tables.

Exit codes: 0 on success, 1 on usage errors (unknown flags, malformed
or infeasible parameters), 2 when a certified theorem inequality fails
— the latter means an implementation bug, never bad input.

The environment variable ``DIOPH_PRECISION_CAP`` (binary digits) bounds
certified refinement everywhere; ``--precision-cap`` sets it for one
run.  ``--jobs`` bounds worker processes; the current implementation
is single-process and sequential, which trivially respects any bound
and keeps output ordering deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import construct, convexbody, gelfond, hankel, heights
from .errors import CounterexampleFound, DiophError, TheoremViolation
from .exactnum import RatPoly, isolate_real_roots
from .serialize import parse_rational, rational_str

__all__ = ["ExperimentConfig", "main", "run"]


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """A complete, serializable description of one batch run.

    ``params`` holds every experiment parameter as a string exactly as
    it appeared on the command line, keyed by flag name and sorted, so
    the config round-trips losslessly and hashes stably.
    """

    command: str
    params: tuple[tuple[str, str], ...] = field(default_factory=tuple)
    output: Optional[str] = None
    format: str = "json"
    precision_cap: Optional[int] = None

    def __post_init__(self):
        if self.format not in ("json", "tsv"):
            raise _UsageError(f"unknown format {self.format!r}")
        if tuple(sorted(self.params)) != self.params:
            object.__setattr__(self, "params", tuple(sorted(self.params)))
        if self.precision_cap is not None and self.precision_cap <= 0:
            raise _UsageError("--precision-cap must be positive")

    def param_dict(self) -> dict[str, str]:
        return dict(self.params)

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "params": {k: v for k, v in self.params},
            "output": self.output,
            "format": self.format,
            "precision_cap": self.precision_cap,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "ExperimentConfig":
        return ExperimentConfig(
            command=d["command"],
            params=tuple(sorted((str(k), str(v)) for k, v in d["params"].items())),
            output=d.get("output"),
            format=d.get("format", "json"),
            precision_cap=d.get("precision_cap"),
        )


# --------------------------------------------------------------------------
# flag parsing helpers (usage errors, never tracebacks)


def _fraction(params: dict, key: str) -> Fraction:
    try:
        return parse_rational(params[key])
    except KeyError:
        raise _UsageError(f"missing --{key}")
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"--{key} must be a rational like 3/4, got {params[key]!r}")


def _fraction_list(params: dict, key: str) -> tuple[Fraction, ...]:
    try:
        raw = params[key]
    except KeyError:
        raise _UsageError(f"missing --{key}")
    try:
        return tuple(parse_rational(x) for x in raw.split(","))
    except (ValueError, ZeroDivisionError):
        raise _UsageError(f"--{key} must be comma-separated rationals, got {raw!r}")


def _poly(params: dict, key: str) -> RatPoly:
    return RatPoly(_fraction_list(params, key))


def _int(params: dict, key: str, default: Optional[int] = None) -> int:
    if key not in params:
        if default is not None:
            return default
        raise _UsageError(f"missing --{key}")
    try:
        return int(params[key])
    except ValueError:
        raise _UsageError(f"--{key} must be an integer, got {params[key]!r}")


def _real_target(params: dict):
    """xi from either --xi (rational) or --xi-poly/--xi-root (algebraic)."""
    if "xi" in params:
        return _fraction(params, "xi")
    if "xi-poly" in params:
        roots = isolate_real_roots(_poly(params, "xi-poly"))
        idx = _int(params, "xi-root", 0)
        if not 0 <= idx < len(roots):
            raise _UsageError(
                f"--xi-root {idx} out of range: {len(roots)} real roots"
            )
        return roots[idx]
    raise _UsageError("missing --xi (or --xi-poly with --xi-root)")


# --------------------------------------------------------------------------
# subcommand handlers: params -> JSON-ready dict


def _cmd_heights(params: dict) -> dict:
    given = [k for k in ("vector", "poly", "matrix") if k in params]
    if len(given) != 1:
        raise _UsageError("give exactly one of --vector, --poly, --matrix")
    if "vector" in params:
        report = heights.height_vector(_fraction_list(params, "vector"))
    elif "poly" in params:
        report = heights.height_polynomial(_poly(params, "poly"))
    else:
        rows = [
            tuple(parse_rational(x) for x in row.split(","))
            for row in params["matrix"].split(";")
        ]
        report = heights.height_matrix(rows)
    return report.to_json_dict()


def _body(params: dict) -> convexbody.BodySpec:
    n = _int(params, "n")
    scales = _fraction_list(params, "X")
    if len(scales) != n + 1:
        raise _UsageError(f"--X needs n+1 = {n + 1} entries, got {len(scales)}")
    try:
        return convexbody.BodySpec.make(n, _real_target(params), scales)
    except DiophError as exc:
        raise _UsageError(str(exc))


def _cmd_minima(params: dict) -> dict:
    body = _body(params)
    exhaustive = None
    if "exhaustive" in params:
        exhaustive = params["exhaustive"] == "true"
    return convexbody.successive_minima(body, exhaustive=exhaustive).to_json_dict()


def _cmd_duality(params: dict) -> dict:
    body = _body(params)
    res = convexbody.successive_minima(body, exhaustive=True)
    return {
        "minkowski": convexbody.minkowski_product_check(res, body).to_json_dict(),
        "duality": convexbody.duality_products(body).to_json_dict(),
    }


def _cmd_hankel_run(params: dict) -> dict:
    q = _poly(params, "q")
    n = _int(params, "n")
    xi = _real_target(params)
    if "X" in params:
        body = _body(params)
        _, _, report = hankel.construct_divisor(
            body, q, _int(params, "k"), _int(params, "t")
        )
        return report.to_json_dict()
    state = hankel.build_state(q, xi, n)
    return state.to_json_dict()


def _cmd_gelfond_check(params: dict) -> dict:
    p = _poly(params, "p")
    q = _poly(params, "q")
    n = _int(params, "n", 0) or None
    return gelfond.resultant_gap_check(p, q, _real_target(params), n).to_json_dict()


def _cmd_module_gen_check(params: dict) -> dict:
    kmax = _int(params, "kmax")
    lmax = _int(params, "lmax")
    if kmax < 1 or lmax < 0:
        raise _UsageError("need --kmax >= 1 and --lmax >= 0")
    results = {}
    for k in range(1, kmax + 1):
        for l in range(lmax + 1):
            results[f"{k},{l}"] = gelfond.minor_module_generation(k, l)
    return {"results": results, "all_true": all(results.values())}


def _cmd_approximate(params: dict) -> dict:
    records = construct.approximation_experiment(
        _real_target(params),
        _int(params, "n"),
        _int(params, "t"),
        _fraction_list(params, "schedule"),
        c=_fraction(params, "c") if "c" in params else Fraction(1, 2),
    )
    return {"records": [r.to_json_dict() for r in records]}


def _cmd_root_gap(params: dict) -> dict:
    return construct.conjugate_distance_check(
        _poly(params, "p"), _real_target(params), _int(params, "t")
    ).to_json_dict()


def _cmd_liouville(params: dict) -> dict:
    mode = params.get("mode", "gap")
    if mode == "targets":
        n, t = _int(params, "n"), _int(params, "t")
        targets = construct.liouville_targets(n, t)
        return {
            "targets": [
                {
                    "index": tgt.j,
                    "exponents": tgt.term_exponents(6),
                    "partial_sums": [
                        rational_str(tgt.partial_sum(m)) for m in range(1, 4)
                    ],
                }
                for tgt in targets
            ]
        }
    if mode == "gap":
        if "alpha-poly" in params:
            roots = isolate_real_roots(_poly(params, "alpha-poly"))
            idx = _int(params, "alpha-root", 0)
            if not 0 <= idx < len(roots):
                raise _UsageError("--alpha-root out of range")
            alpha = roots[idx]
        else:
            alpha = _fraction(params, "alpha")
        n = _int(params, "n", 0) or None
        return construct.liouville_inequality_check(
            alpha, _fraction(params, "r"), n
        ).to_json_dict()
    if mode == "adversarial":
        return construct.adversarial_approximation_check(
            _int(params, "n"),
            _int(params, "t"),
            _fraction(params, "kappa"),
            _int(params, "hmax"),
        ).to_json_dict()
    raise _UsageError(f"--mode must be targets, gap or adversarial, got {mode!r}")


_HANDLERS: dict[str, Callable[[dict], dict]] = {
    "heights": _cmd_heights,
    "minima": _cmd_minima,
    "duality": _cmd_duality,
    "hankel-run": _cmd_hankel_run,
    "gelfond-check": _cmd_gelfond_check,
    "module-gen-check": _cmd_module_gen_check,
    "approximate": _cmd_approximate,
    "root-gap": _cmd_root_gap,
    "liouville": _cmd_liouville,
}

# free-form flags accepted per subcommand (everything is a string here;
# handlers do the exact parsing and emit usage errors with flag names)
_FLAGS: dict[str, tuple[str, ...]] = {
    "heights": ("vector", "poly", "matrix"),
    "minima": ("n", "xi", "xi-poly", "xi-root", "X", "exhaustive"),
    "duality": ("n", "xi", "X"),
    "hankel-run": ("q", "n", "xi", "xi-poly", "xi-root", "X", "k", "t"),
    "gelfond-check": ("p", "q", "xi", "xi-poly", "xi-root", "n"),
    "module-gen-check": ("kmax", "lmax"),
    "approximate": ("xi-poly", "xi-root", "n", "t", "schedule", "c"),
    "root-gap": ("p", "xi", "xi-poly", "xi-root", "t"),
    "liouville": (
        "mode",
        "n",
        "t",
        "alpha",
        "alpha-poly",
        "alpha-root",
        "r",
        "kappa",
        "hmax",
    ),
}


# --------------------------------------------------------------------------
# rendering


def _flatten(obj, prefix: str, out: list[tuple[str, str]]):
    if isinstance(obj, dict):
        for k in sorted(obj):
            _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k), out)
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _flatten(v, f"{prefix}[{i}]", out)
    else:
        out.append((prefix, "" if obj is None else str(obj)))


def _render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    rows: list[tuple[str, str]] = []
    _flatten(payload, "", rows)
    return "".join(f"{k}\t{v}\n" for k, v in rows)


def run(config: ExperimentConfig) -> int:
    """Execute one config; returns the process exit status."""
    if config.command not in _HANDLERS:
        _error(f"unknown command {config.command!r}")
        return 1
    if config.precision_cap is not None:
        os.environ["DIOPH_PRECISION_CAP"] = str(config.precision_cap)
    try:
        payload = _HANDLERS[config.command](config.param_dict())
    except _UsageError as exc:
        _error(str(exc))
        return 1
    except (TheoremViolation, CounterexampleFound) as exc:
        _error(f"certified inequality failed: {exc}")
        return 2
    except DiophError as exc:
        _error(str(exc))
        return 1
    text = _render(payload, config.format)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _error(message: str):
    print(f"dioph: error: {message}", file=sys.stderr)


# --------------------------------------------------------------------------
# argv -> config


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit(2); we use 1
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="dioph", description=__doc__, add_help=True)
    parser.add_argument("--format", choices=("json", "tsv"), default="json")
    parser.add_argument("--output", default=None, metavar="PATH")
    parser.add_argument("--precision-cap", type=int, default=None, metavar="BITS")
    parser.add_argument("--jobs", type=int, default=1, metavar="N")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, flags in _FLAGS.items():
        p = sub.add_parser(name, prog=f"dioph {name}")
        for flag in flags:
            p.add_argument(f"--{flag}", dest=f"flag_{flag}", default=None)
    return parser


def config_from_argv(argv: list[str]) -> ExperimentConfig:
    ns = _build_parser().parse_args(argv)
    if ns.command is None:
        raise _UsageError("a subcommand is required; see --help")
    if ns.jobs < 1:
        raise _UsageError("--jobs must be at least 1")
    params = tuple(
        sorted(
            (key[len("flag_") :].replace("_", "-"), value)
            for key, value in vars(ns).items()
            if key.startswith("flag_") and value is not None
        )
    )
    return ExperimentConfig(
        command=ns.command,
        params=params,
        output=ns.output,
        format=ns.format,
        precision_cap=ns.precision_cap,
    )


def main(argv: Optional[list[str]] = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    try:
        config = config_from_argv(list(argv))
    except _UsageError as exc:
        _error(str(exc))
        return 1
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
