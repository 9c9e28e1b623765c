"""Command-line front end: ``bdsym <subcommand> [options] files...``.

Exit status is 0 on success (or a true check), 1 when a check comes out
false or a search finds nothing, and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

from .core import (
    StateVector,
    TruthTable,
    all_states,
    bitstring,
    dual,
    excited,
    fixed_points,
    is_self_dual,
    parse_bijection,
    parse_function,
)
from .errors import BdsymError, NotAnAutomorphism
from .groups import PairSet, classify, generate_group, is_symmetry_group
from .morphisms import (
    DEFAULT_SEED,
    MorphismPair,
    check_anti_iso,
    check_iso,
    find_anti_isos,
    find_isos,
    parse_pair,
    verify_theorem28,
    verify_theorem29,
)
from .orbits import (
    TimedSchedule,
    anti_orbit_branches,
    continuous_anti_orbit,
    continuous_orbit,
    discrete_orbit,
    parse_schedule,
    system_prefixes,
)
from .portrait import build_portrait, render_dot, render_json, render_text

EXIT_OK, EXIT_FALSE, EXIT_USAGE = 0, 1, 2

FORMATS = {
    "show": ("text", "json"),
    "portrait": ("text", "json", "dot"),
    "orbit": ("text", "json"),
    "anti-orbit": ("text", "json"),
    "iso": ("text", "json"),
    "anti-iso": ("text", "json"),
    "aut": ("text", "json"),
    "anti-aut": ("text", "json"),
    "group": ("text", "json"),
    "classify": ("text", "json"),
    "check-pair": ("text", "json"),
    "verify": ("text", "json"),
    "equal-systems": ("text", "json"),
}


@dataclass
class RunConfig:
    subcommand: str
    inputs: list[str]
    horizon: int = 4
    budget: int = 1000
    seed: int = DEFAULT_SEED
    format: str = "text"
    limit: int | None = None
    count: bool = False
    all: bool = False


class InputError(BdsymError):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that prints the full grammar on usage errors."""

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _horizon(text: str) -> int:
    value = int(text)
    if value < -1:
        raise argparse.ArgumentTypeError(f"must be >= -1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--horizon", type=_horizon, default=4, metavar="K", help="orbit horizon K (default 4)")
    common.add_argument("--budget", type=_nonneg, default=1000, metavar="N", help="sample budget (default 1000)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, metavar="S", help="sampling seed")
    common.add_argument("--format", default="text", choices=("text", "json", "dot"))
    common.add_argument("--limit", type=_nonneg, default=None, metavar="L", help="stop after L results")
    common.add_argument("--count", action="store_true", help="print only the number of results")
    common.add_argument("--all", action="store_true", help="list every automorphism in reports")

    parser = _Parser(prog="bdsym", description="Symmetry analysis of asynchronous Boolean systems.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add(name, help_, *positionals):
        p = sub.add_parser(name, parents=[common], help=help_)
        for pos, kw in positionals:
            p.add_argument(pos, **kw)
        return p

    fn = ("function", {"help": "function file"})
    add("show", "print a function, its fixed points and dual", fn)
    add("portrait", "state portrait as text, JSON or DOT", fn)
    add("orbit", "forward semi-orbit for a schedule file", fn, ("start", {"help": "start state bits"}), ("schedule", {}))
    add("anti-orbit", "anti-semi-orbit branches for a schedule file", fn, ("start", {}), ("schedule", {}))
    add("iso", "all isomorphisms phi -> psi", ("phi", {}), ("psi", {}))
    add("anti-iso", "all anti-isomorphisms phi -> psi", ("phi", {}), ("psi", {}))
    add("aut", "automorphism group", fn)
    add("anti-aut", "anti-automorphisms", fn)
    add("group", "group generated by pair files", fn, ("pairs", {"nargs": "+", "help": "generator pair files"}))
    add("classify", "symmetry classification", fn)
    p = add("check-pair", "check one couple (pair file, or g and g' bijection files)",
            ("phi", {}), ("psi", {}), ("maps", {"nargs": "+", "metavar": "PAIR | G GP"}))
    p.add_argument("--anti", action="store_true", help="check an anti-isomorphism")
    p = add("verify", "check the three equivalent characterisations of a couple",
            ("phi", {}), ("psi", {}), ("maps", {"nargs": "+", "metavar": "PAIR | G GP"}))
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--thm29", action="store_true", help="isomorphism characterisations")
    which.add_argument("--thm28", action="store_true", help="anti-isomorphism characterisations")
    p = add("equal-systems", "compare forward prefixes of A with MODE prefixes of B", ("a", {}), ("b", {}))
    p.add_argument("--mode", choices=("forward", "anti"), default="forward")
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None


def _load(path: str, parser):
    try:
        return parser(_read(path))
    except InputError:
        raise
    except BdsymError as exc:
        raise InputError(f"{path}: {exc}") from None


def load_function(path: str) -> TruthTable:
    return _load(path, parse_function)


def _load_maps(paths: list[str], kind: str) -> MorphismPair:
    if len(paths) == 1:
        return _load(paths[0], lambda text: parse_pair(text, kind))
    if len(paths) == 2:
        g, gp = (_load(p, parse_bijection) for p in paths)
        if g.n != gp.n:
            raise InputError("g and g' have different dimensions")
        return MorphismPair(g, gp, kind)
    raise InputError(f"expected a pair file or two bijection files, got {len(paths)} paths")


def _same_n(*tables) -> None:
    if len({t.n for t in tables}) > 1:
        raise InputError("input files have different dimensions")


def _pair_text(p: MorphismPair) -> str:
    n = p.n
    g = " ".join(bitstring(n, v) for v in p.g.rows)
    gp = " ".join(bitstring(n, v) for v in p.gp.rows)
    return f"g=[{g}]  g'=[{gp}]"


class _Runner:
    def __init__(self, cfg: RunConfig, args, out: TextIO):
        self.cfg = cfg
        self.args = args
        self.out = out

    def emit(self, text: str = "") -> None:
        self.out.write(text if text.endswith("\n") else text + "\n")

    def emit_json(self, data) -> None:
        self.emit(json.dumps(data))

    # -- subcommands -------------------------------------------------------

    def show(self) -> int:
        phi = load_function(self.args.function)
        fps = sorted(fixed_points(phi))
        if self.cfg.format == "json":
            self.emit_json({
                "n": phi.n,
                "rows": {bitstring(phi.n, i): bitstring(phi.n, r) for i, r in enumerate(phi.rows)},
                "excited": {str(mu): str(excited(phi, mu)) for mu in all_states(phi.n)},
                "fixed_points": [str(s) for s in fps],
                "self_dual": is_self_dual(phi),
            })
            return EXIT_OK
        d = dual(phi)
        self.emit(f"n={phi.n}")
        self.emit("mu" + " " * (phi.n - 1) + " Phi(mu)" + " " * max(0, phi.n - 6) + " excited  dual")
        for i, r in enumerate(phi.rows):
            self.emit(f"{bitstring(phi.n, i)} {bitstring(phi.n, r):>7}  {bitstring(phi.n, r ^ i):>7}  {bitstring(phi.n, d.rows[i])}")
        self.emit(f"fixed points: {' '.join(map(str, fps)) or '(none)'}")
        self.emit(f"self-dual: {str(is_self_dual(phi)).lower()}")
        return EXIT_OK

    def portrait(self) -> int:
        graph = build_portrait(load_function(self.args.function))
        render = {"dot": render_dot, "json": render_json, "text": render_text}[self.cfg.format]
        self.emit(render(graph))
        return EXIT_OK

    def _orbit_inputs(self):
        phi = load_function(self.args.function)
        try:
            mu = StateVector.parse(self.args.start)
        except BdsymError as exc:
            raise InputError(f"start state: {exc}") from None
        schedule = _load(self.args.schedule, parse_schedule)
        _same_n(phi, mu, schedule)
        return phi, mu, schedule

    def orbit(self) -> int:
        phi, mu, schedule = self._orbit_inputs()
        if isinstance(schedule, TimedSchedule):
            signal = continuous_orbit(phi, mu, schedule)
            if self.cfg.format == "json":
                self.emit_json(signal.to_json())
            else:
                self._signal_text(signal)
            return EXIT_OK
        orbit = discrete_orbit(phi, mu, schedule)
        if self.cfg.format == "json":
            self.emit_json({"values": [str(v) for v in orbit.values]})
        else:
            for k, v in enumerate(orbit.values, start=-1):
                self.emit(f"k={k:<3d} {v}")
        return EXIT_OK

    def _signal_text(self, signal) -> None:
        times = signal.times
        if not times:
            self.emit(f"(-inf, inf): {signal.initial}")
            return
        self.emit(f"(-inf, {times[0]:g}): {signal.initial}")
        for i, (t, v) in enumerate(signal.breakpoints):
            end = f"{times[i + 1]:g})" if i + 1 < len(times) else "inf)"
            self.emit(f"[{t:g}, {end}: {v}")

    def anti_orbit(self) -> int:
        phi, mu, schedule = self._orbit_inputs()
        timed = isinstance(schedule, TimedSchedule)
        steps = schedule.schedule if timed else schedule
        branches = sorted(anti_orbit_branches(phi, mu, steps), key=lambda b: b.indices())
        if self.cfg.limit is not None:
            branches = branches[: self.cfg.limit]
        if self.cfg.count:
            self._count(len(branches))
        elif self.cfg.format == "json":
            if timed:
                self.emit_json({"branches": [continuous_anti_orbit(phi, b, schedule).to_json() for b in branches]})
            else:
                self.emit_json({"branches": [[str(v) for v in b.values] for b in branches]})
        else:
            self.emit(f"{len(branches)} branch(es)")
            for b in branches:
                self.emit(str(b))
        return EXIT_OK if branches else EXIT_FALSE

    def _count(self, count: int) -> None:
        if self.cfg.format == "json":
            self.emit_json({"count": count})
        else:
            self.emit(str(count))

    def _search(self, phi, psi, anti: bool) -> int:
        _same_n(phi, psi)
        finder = find_anti_isos if anti else find_isos
        result = finder(phi, psi, limit=self.cfg.limit, count_only=self.cfg.count)
        if self.cfg.count:
            self._count(result.count)
        elif self.cfg.format == "json":
            for p in result:
                self.emit_json(p.to_json())
        else:
            if not result:
                self.emit("[]")
            for p in result:
                self.emit(_pair_text(p))
            if result.truncated:
                self.emit(f"(truncated at {self.cfg.limit})")
        return EXIT_OK if result.count else EXIT_FALSE

    def iso(self) -> int:
        return self._search(load_function(self.args.phi), load_function(self.args.psi), anti=False)

    def anti_iso(self) -> int:
        return self._search(load_function(self.args.phi), load_function(self.args.psi), anti=True)

    def aut(self) -> int:
        phi = load_function(self.args.function)
        return self._search(phi, phi, anti=False)

    def anti_aut(self) -> int:
        phi = load_function(self.args.function)
        return self._search(phi, phi, anti=True)

    def group(self) -> int:
        phi = load_function(self.args.function)
        gens = [_load(p, parse_pair) for p in self.args.pairs]
        _same_n(phi, *(g.g for g in gens))
        try:
            group = generate_group(PairSet(phi.n, tuple(gens)), phi)
        except NotAnAutomorphism as exc:
            self.emit(f"not a group of symmetry: {exc}")
            return EXIT_FALSE
        symmetry = is_symmetry_group(group, phi)
        if self.cfg.format == "json":
            self.emit_json({**group.to_json(), "flags": {"symmetry_group": symmetry}, "witnesses": {}})
        else:
            self.emit(f"order {group.order}{' (group of symmetry)' if symmetry else ''}")
            for p in group:
                self.emit(_pair_text(p))
        return EXIT_OK

    def classify(self) -> int:
        report = classify(load_function(self.args.function))
        if self.cfg.format == "json":
            self.emit_json(report.to_json(include_pairs=self.cfg.all))
        else:
            self.emit(report.render())
            if self.cfg.all and report.aut is not None:
                for p in report.aut:
                    self.emit(_pair_text(p))
        return EXIT_OK

    def check_pair(self) -> int:
        kind = "anti-iso" if self.args.anti else "iso"
        phi, psi = load_function(self.args.phi), load_function(self.args.psi)
        pair = _load_maps(self.args.maps, kind)
        _same_n(phi, psi, pair.g)
        ok = (check_anti_iso if self.args.anti else check_iso)(phi, psi, pair.g, pair.gp)
        if self.cfg.format == "json":
            self.emit_json({"kind": kind, "holds": ok})
        else:
            self.emit(f"{kind}: {str(ok).lower()}")
        return EXIT_OK if ok else EXIT_FALSE

    def verify(self) -> int:
        kind = "anti-iso" if self.args.thm28 else "iso"
        phi, psi = load_function(self.args.phi), load_function(self.args.psi)
        pair = _load_maps(self.args.maps, kind)
        _same_n(phi, psi, pair.g)
        fn = verify_theorem28 if self.args.thm28 else verify_theorem29
        report = fn(phi, psi, pair.g, pair.gp, self.cfg.horizon, self.cfg.budget, self.cfg.seed)
        if self.cfg.format == "json":
            self.emit_json(report.to_json())
        else:
            self.emit(report.render())
        return EXIT_OK if report.passed else EXIT_FALSE

    def equal_systems(self) -> int:
        a, b = load_function(self.args.a), load_function(self.args.b)
        _same_n(a, b)
        left = system_prefixes(a, self.cfg.horizon, "forward")
        right = system_prefixes(b, self.cfg.horizon, self.args.mode)
        equal = left.same_system(right)
        if self.cfg.format == "json":
            self.emit_json({
                "equal": equal,
                "horizon": self.cfg.horizon,
                "mode": self.args.mode,
                "sizes": [len(left), len(right)],
                "only_a": [[bitstring(a.n, s) for s in q] for q in sorted(left.sequences - right.sequences)],
                "only_b": [[bitstring(a.n, s) for s in q] for q in sorted(right.sequences - left.sequences)],
            })
        else:
            self.emit(f"forward(A) {'==' if equal else '!='} {self.args.mode}(B) at K={self.cfg.horizon}"
                      f"  ({len(left)} vs {len(right)} collapsed sequences)")
        return EXIT_OK if equal else EXIT_FALSE


def run(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    """Parse ``argv`` and dispatch; returns the exit status."""
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = RunConfig(
        subcommand=args.subcommand,
        inputs=[v for k, v in vars(args).items() if k in ("function", "phi", "psi", "a", "b", "schedule")],
        horizon=args.horizon,
        budget=args.budget,
        seed=args.seed,
        format=args.format,
        limit=args.limit,
        count=args.count,
        all=args.all,
    )
    if cfg.format not in FORMATS[cfg.subcommand]:
        print(f"bdsym {cfg.subcommand}: error: --format {cfg.format} is not supported here "
              f"(choose from {', '.join(FORMATS[cfg.subcommand])})", file=sys.stderr)
        return EXIT_USAGE
    runner = _Runner(cfg, args, out)
    try:
        return getattr(runner, cfg.subcommand.replace("-", "_"))()
    except BdsymError as exc:
        print(f"bdsym: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
