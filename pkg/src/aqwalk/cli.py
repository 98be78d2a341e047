"""Command-line entry point.

    aqwalk run    --sequence fibonacci --mode dynamic --rho 0.2 --theta2 0.67 --phi2 1.49 --angle-unit pi
    aqwalk sweep  --sequence thue-morse --rho 0.2 --theta-step 0.1 --angle-unit pi --output tm.csv
    aqwalk seq    --kind rudin-shapiro --length 16
    aqwalk accept --only 1,4

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, fields

from . import __version__, kernels
from .analysis import fit_exponent, summarize_entropy
from .coin import CoinParams
from .engine import StaticIndexing, WalkConfig, WalkMode, evolve
from .sequences import SequenceKind, make_word
from .sweep import SweepConfig, run_sweep

log = logging.getLogger("aqwalk")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

KINDS = [k.value for k in SequenceKind]


class UsageError(Exception):
    pass


@dataclass
class RunSpec:
    command: str = "run"
    sequence: str = "fibonacci"
    mode: str = "dynamic"
    steps: int = 5000
    rho: float | None = None
    rho1: float = 0.5
    rho2: float = 0.5
    theta1: float = 0.0
    phi1: float = 0.0
    theta2: float = 0.0
    phi2: float = 0.0
    theta_step: float = 0.01
    phi_step: float = 0.01
    angle_unit: str = "pi"
    fit_window: str | None = None
    avg_window: str | None = None
    static_indexing: str = "offset"
    seed: int = 0
    workers: int = 1
    output: str | None = None
    format: str = "csv"
    resume: bool = False
    snapshot_steps: str | None = None
    # seq
    kind: str = "fibonacci"
    length: int = 0
    signs: bool = False
    # accept
    only: str | None = None

    def angle(self, value: float) -> float:
        return value * math.pi if self.angle_unit == "pi" else value

    def coins(self) -> tuple[CoinParams, CoinParams]:
        rho1 = self.rho if self.rho is not None else self.rho1
        rho2 = self.rho if self.rho is not None else self.rho2
        return (
            CoinParams(rho1, self.angle(self.theta1), self.angle(self.phi1)),
            CoinParams(rho2, self.angle(self.theta2), self.angle(self.phi2)),
        )

    def walk_config(self) -> WalkConfig:
        c1, c2 = self.coins()
        return WalkConfig(
            sequence=self.sequence,
            mode=self.mode,
            steps=self.steps,
            coin1=c1,
            coin2=c2,
            seed=self.seed,
            static_indexing=self.static_indexing,
        )

    def header_items(self) -> dict:
        """Fields relevant to `command`, for output headers."""
        keep = _COMMAND_FIELDS[self.command]
        return {f.name: getattr(self, f.name) for f in fields(self) if f.name in keep}


_WALK_FIELDS = {
    "sequence", "mode", "steps", "rho", "rho1", "rho2", "theta1", "phi1",
    "angle_unit", "fit_window", "avg_window", "static_indexing", "seed", "format",
}
_COMMAND_FIELDS = {
    "run": _WALK_FIELDS | {"command", "theta2", "phi2", "snapshot_steps"},
    "sweep": _WALK_FIELDS | {"command", "theta_step", "phi_step"},
    "seq": {"command", "kind", "length", "seed", "format", "signs"},
    "accept": {"command", "only"},
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _window(text: str | None):
    if text is None:
        return None
    lo, sep, hi = str(text).partition(":")
    if not sep:
        raise UsageError(f"window must look like LO:HI, got {text!r}")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"window must look like LO:HI, got {text!r}") from None


def _int_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _walk_options(p: argparse.ArgumentParser, sweep: bool) -> None:
    p.add_argument("--config", help="key=value file; explicit flags override it")
    p.add_argument("--sequence", choices=KINDS, default="fibonacci")
    p.add_argument("--mode", choices=[m.value for m in WalkMode], default="dynamic")
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--rho", type=float, default=None, help="sets rho of both coins")
    p.add_argument("--rho1", type=float, default=0.5)
    p.add_argument("--rho2", type=float, default=0.5)
    p.add_argument("--theta1", type=float, default=0.0)
    p.add_argument("--phi1", type=float, default=0.0)
    if sweep:
        p.add_argument("--theta-step", type=float, default=0.01)
        p.add_argument("--phi-step", type=float, default=0.01)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--resume", action="store_true")
    else:
        p.add_argument("--theta2", type=float, default=0.0)
        p.add_argument("--phi2", type=float, default=0.0)
        p.add_argument("--snapshot-steps", default=None, help="comma-separated steps at which to dump P(x)")
    p.add_argument(
        "--angle-unit", choices=["rad", "pi"], default="pi",
        help="unit of theta/phi values and grid steps (default: multiples of pi)",
    )
    p.add_argument("--fit-window", default=None, help="LO:HI inclusive steps (default: last 90%%)")
    p.add_argument("--avg-window", default=None, help="LO:HI inclusive steps (default: last 50%%)")
    p.add_argument("--static-indexing", choices=[s.value for s in StaticIndexing], default="offset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aqwalk", description=__doc__.splitlines()[0] if __doc__ else None)
    parser.add_argument("--version", action="version", version=f"aqwalk {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _walk_options(sub.add_parser("run", help="single walk, writes t,sigma,entropy"), sweep=False)
    _walk_options(sub.add_parser("sweep", help="(theta2, phi2) grid at fixed rho"), sweep=True)

    seq = sub.add_parser("seq", help="print a binary word")
    seq.add_argument("--config")
    seq.add_argument("--kind", choices=[k for k in KINDS if k != "homogeneous"], default="fibonacci")
    seq.add_argument("--length", type=int, default=0)
    seq.add_argument("--seed", type=int, default=0)
    seq.add_argument("--format", choices=["plain", "csv"], default="plain")
    seq.add_argument("--signs", action="store_true", help="print +1/-1 instead of 0/1")

    acc = sub.add_parser("accept", help="run the acceptance experiments")
    acc.add_argument("--config")
    acc.add_argument("--only", default=None, help="comma-separated criterion numbers")
    return parser


def load_config(path: str) -> dict:
    """Read key=value pairs.

    Lines of the form ``# run.key=value`` (the header of a `run` or `sweep`
    output file) are accepted too, so an output can be fed back with
    ``--config`` to repeat the run.
    """
    items = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if any(raw.startswith("# run.") for raw in lines):
        lines = [raw[len("# run."):] for raw in lines if raw.startswith("# run.")]
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}: expected key=value, got {raw!r}")
        key = key.strip().replace("-", "_")
        value = value.strip()
        try:
            items[key] = json.loads(value)
        except json.JSONDecodeError:
            items[key] = value
    return items


def parse_spec(argv: list[str]) -> RunSpec:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if getattr(ns, "config", None):
        sub = parser._subparsers._group_actions[0].choices[ns.command]
        known = {a.dest for a in sub._actions}
        cfg = load_config(ns.config)
        unknown = sorted(set(cfg) - known - {"command"})
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        cfg.pop("command", None)
        sub.set_defaults(**cfg)
        ns = parser.parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if k not in ("config", "verbose")}
    spec = RunSpec(**values)
    _validate(spec)
    return spec


def _validate(spec: RunSpec) -> None:
    try:
        if spec.command in ("run", "sweep"):
            if spec.steps < 1:
                raise UsageError(f"--steps must be >= 1, got {spec.steps}")
            spec.walk_config()
            _window(spec.fit_window)
            _window(spec.avg_window)
            _int_list(spec.snapshot_steps)
        if spec.command == "sweep":
            if spec.workers < 1:
                raise UsageError("--workers must be >= 1")
            if spec.theta_step <= 0 or spec.phi_step <= 0:
                raise UsageError("grid steps must be positive")
            if spec.resume and not spec.output:
                raise UsageError("--resume needs --output")
        if spec.command == "seq" and spec.length < 1:
            raise UsageError(f"--length must be >= 1, got {spec.length}")
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _header(spec: RunSpec, extra: dict) -> list[str]:
    lines = [f"# run.{k}={json.dumps(v)}" for k, v in spec.header_items().items()]
    lines.append(f"# info.backend={json.dumps(kernels.BACKEND)}")
    lines.append(f"# info.version={json.dumps(__version__)}")
    lines += [f"# summary.{k}={json.dumps(v)}" for k, v in extra.items()]
    return lines


def read_header(path: str) -> dict:
    """Parse ``# section.key=value`` header lines into nested dicts."""
    out: dict = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("# "):
                if line.startswith("{"):
                    return json.loads(line + fh.read())["metadata"]
                continue
            key, _, value = line[2:].rstrip("\n").partition("=")
            section, _, name = key.partition(".")
            out.setdefault(section, {})[name] = json.loads(value)
    return out


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def cmd_run(spec: RunSpec) -> int:
    config = spec.walk_config()
    snaps = _int_list(spec.snapshot_steps)
    ts = evolve(config, snapshot_steps=snaps)
    fit = fit_exponent(ts, _window(spec.fit_window))
    ent = summarize_entropy(ts, _window(spec.avg_window))
    summary = {
        "alpha": fit.alpha,
        "intercept": fit.intercept,
        "fit_window": list(fit.window),
        "entropy_mean": ent.mean,
        "entropy_std": ent.std,
        "avg_window": list(ent.window),
        "norm_drift": abs(ts.final_state.norm() - 1.0),
    }
    if spec.output:
        if spec.format == "json":
            payload = {
                "metadata": {
                    "run": spec.header_items(),
                    "info": {"backend": kernels.BACKEND, "version": __version__},
                    "summary": summary,
                },
                "series": {"t": ts.t.tolist(), "sigma": ts.sigma.tolist(), "entropy": ts.entropy.tolist()},
                "snapshots": {
                    str(t): {"x": list(range(-config.steps, config.steps + 1)), "p": p.tolist()}
                    for t, p in ts.snapshots.items()
                },
            }
            text = json.dumps(payload) + "\n"
        else:
            rows = _header(spec, summary)
            rows.append("t,sigma,entropy")
            rows += [f"{t},{s!r},{e!r}" for t, s, e in zip(range(ts.steps + 1), ts.sigma.tolist(), ts.entropy.tolist())]
            for t, p in sorted(ts.snapshots.items()):
                rows.append(f"# snapshot t={t}")
                rows.append("x,p")
                x0 = -config.steps
                rows += [f"{x0 + i},{v!r}" for i, v in enumerate(p.tolist()) if abs(x0 + i) <= t]
            text = "\n".join(rows) + "\n"
        _write(spec.output, text)
    print(
        f"alpha={fit.alpha:.6f} entropy_mean={ent.mean:.6f} entropy_std={ent.std:.6f} "
        f"fit_window={fit.window[0]}:{fit.window[1]} avg_window={ent.window[0]}:{ent.window[1]}"
    )
    return EXIT_OK


def cmd_sweep(spec: RunSpec) -> int:
    rho = spec.rho if spec.rho is not None else spec.rho1
    base = spec.walk_config()
    config = SweepConfig(
        base=base,
        rho=rho,
        theta1=spec.angle(spec.theta1),
        phi1=spec.angle(spec.phi1),
        theta_step=spec.angle(spec.theta_step),
        phi_step=spec.angle(spec.phi_step),
        fit_window=_window(spec.fit_window),
        avg_window=_window(spec.avg_window),
        workers=spec.workers,
    )
    checkpoint = f"{spec.output}.partial" if spec.output and spec.output != "-" else None
    n = config.shape[0] * config.shape[1]
    last = [0]

    def progress(done, total):
        if done * 10 // total > last[0]:
            last[0] = done * 10 // total
            log.info("sweep %d/%d points", done, total)

    log.info("sweep of %d points with %d worker(s)", n, spec.workers)
    result = run_sweep(config, checkpoint=checkpoint, resume=spec.resume, progress=progress)
    result.metadata = {**{f"run.{k}": v for k, v in spec.header_items().items()}, **result.metadata}
    text = result.to_json() if spec.format == "json" else result.to_csv()
    _write(spec.output, text)
    if checkpoint:
        os.remove(checkpoint)
    failed = sum(not r.ok for r in result.records)
    if failed:
        print(f"{failed} of {n} grid points failed", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_seq(spec: RunSpec) -> int:
    word = make_word(spec.kind, spec.length, spec.seed)
    tokens = [str(v) for v in (word.as_signs() if spec.signs else word.symbols).tolist()]
    sep = "," if spec.format == "csv" else " "
    print(sep.join(tokens))
    return EXIT_OK


def cmd_accept(spec: RunSpec) -> int:
    from .acceptance import CRITERIA

    wanted = set(_int_list(spec.only))
    ok_all = True
    for crit in CRITERIA:
        if wanted and crit.number not in wanted:
            continue
        ok, detail = crit.check()
        ok_all &= ok
        print(f"[{'PASS' if ok else 'FAIL'}] {crit.number:2d} {crit.name}: {detail}", flush=True)
    return EXIT_OK if ok_all else EXIT_RUNTIME


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "seq": cmd_seq, "accept": cmd_accept}


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(
        level=logging.INFO if ("-v" in argv or "--verbose" in argv) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        spec = parse_spec(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[spec.command](spec)
    except OSError as exc:
        print(f"aqwalk: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except ValueError as exc:
        print(f"aqwalk: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
