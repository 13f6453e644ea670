"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad graph, invalid query,
capacity exceeded, ...), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from . import analysis, explorer
from .constructions import exponent, gamma_tm, periodic, support_ray
from .presentation import GraphError, load_graph, parse_graph, serialize_graph, to_dot
from .words import crossing_walls, identity, is_geodesic_word, reduce

PRESETS = ("paper-alpha", "paper-gamma", "paper-ldiv", "paper-flat",
           "paper-freeproduct", "paper-gersten")


@dataclass
class ExperimentConfig:
    preset: str = ""
    graph: str = "gamma:2"
    measure: str = "geodesic"  # geodesic | lower | gersten
    geodesic: str = "periodic"
    word: str = ""
    m: int | None = None
    t: str | None = None
    r_min: int = 1
    r_max: int = 8
    cap_radius: int | None = None
    cap_nodes: int = explorer.DEFAULT_CAP_NODES
    stab_delta: int = 2
    fit_range: str | None = None
    expected_exponent: str | None = None
    tol: float = 0.5
    window: str = "-10:10"
    compare_graph: str | None = None
    compare_word: str | None = None
    out: str = "results"
    workers: int = 1

    def validate(self):
        if self.r_min < 0 or self.r_max < self.r_min:
            raise ValueError(f"empty radius range {self.r_min}..{self.r_max}")
        if self.cap_radius is not None and self.cap_radius < 2 * self.r_max:
            raise ValueError(f"cap_radius {self.cap_radius} < 2 * r_max")
        if self.cap_nodes < 1:
            raise ValueError("cap_nodes must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def caps(self) -> explorer.SearchCaps:
        return explorer.SearchCaps(self.cap_radius, self.cap_nodes, self.stab_delta)

    def fit_bounds(self) -> tuple[int, int]:
        if self.fit_range:
            return parse_range(self.fit_range)
        return (max(2, self.r_min), self.r_max)


def experiment_preset(name: str, m: int | None = None, t: str | None = None) -> ExperimentConfig:
    if name == "paper-flat":
        return ExperimentConfig(name, "gamma:1", word="a_0 b_0", r_max=8, fit_range="2:8",
                                expected_exponent="1")
    if name == "paper-alpha":
        m = m or 2
        return ExperimentConfig(name, f"gamma:{m}", word=f"a_{m} b_{m}", m=m,
                                r_max=8 if m <= 2 else 6, expected_exponent=str(m))
    if name == "paper-gamma":
        m = m or 3
        tt = exponent(t or "2")
        return ExperimentConfig(name, f"gamma:{m}", geodesic="gamma", m=m, t=str(tt),
                                r_max=6, expected_exponent=str(m - 1 + 1 / tt))
    if name == "paper-ldiv":
        m = m or 3
        tt = exponent(t or "2")
        return ExperimentConfig(name, f"gamma:{m}", measure="lower", geodesic="gamma", m=m,
                                t=str(tt), r_max=5, expected_exponent="2")
    if name == "paper-freeproduct":
        m = m or 3
        return ExperimentConfig(name, f"omega:{m}", word="G2.a_2 G2.b_2", m=m, r_max=4,
                                expected_exponent="2", compare_graph="gamma:2",
                                compare_word="a_2 b_2")
    if name == "paper-gersten":
        m = m or 2
        return ExperimentConfig(name, f"gamma:{m}", measure="gersten", geodesic="", m=m,
                                r_max=5, expected_exponent=str(m))
    raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")


class UsageError(Exception):
    pass


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise UsageError(f"bad range {text!r}, expected lo:hi")
    try:
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected lo:hi") from None


def read_config_file(path) -> dict[str, str]:
    out = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def apply_overrides(cfg: ExperimentConfig, values: dict) -> ExperimentConfig:
    updates = {}
    for key, value in values.items():
        if value is None:
            continue
        if key not in _FIELD_TYPES:
            raise UsageError(f"unknown config key {key!r}")
        typ = _FIELD_TYPES[key]
        if isinstance(value, str) and "int" in typ:
            value = int(value)
        elif isinstance(value, str) and "float" in typ:
            value = float(value)
        updates[key] = value
    return replace(cfg, **updates)


def build_geodesic(g, kind: str, word: str | None = None, m: int | None = None,
                   t: str | None = None, hyperplane_type: str | None = None):
    if kind == "periodic":
        if not word:
            raise UsageError("--geodesic periodic needs --word")
        return periodic(g, word)
    if kind == "gamma":
        if m is None:
            m = g.family.m
        if m is None:
            raise UsageError("--geodesic gamma needs --m")
        return gamma_tm(g, m, t or "2")
    if kind == "support":
        if not hyperplane_type:
            raise UsageError("--geodesic support needs --type")
        return support_ray(g, hyperplane_type)
    raise UsageError(f"unknown geodesic kind {kind!r}")


def parse_ray(g, text: str):
    """``support:<type>[:<u>,<v>]`` or ``word:<letters>`` (periodic ray)."""
    kind, _, rest = text.partition(":")
    if kind == "support":
        typ, _, pair = rest.partition(":")
        return support_ray(g, typ, pair=tuple(pair.split(",")) if pair else None)
    if kind == "word":
        return periodic(g, rest)
    raise UsageError(f"bad ray selector {text!r}")


def effective_config_text(cfg: ExperimentConfig) -> str:
    return "\n".join(f"# {k} = {'' if v is None else v}" for k, v in asdict(cfg).items())


def run_experiment(cfg: ExperimentConfig, stdout=sys.stdout) -> int:
    cfg.validate()
    g = load_graph(cfg.graph)
    caps = cfg.caps()
    radii = list(range(cfg.r_min, cfg.r_max + 1))
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    compare = None
    if cfg.measure == "gersten":
        samples = explorer.run_parallel(
            _GerstenJob(g, caps), radii, cfg.workers)
    else:
        spec = build_geodesic(g, cfg.geodesic, cfg.word, cfg.m, cfg.t)
        if cfg.measure == "lower":
            lo, hi = parse_range(cfg.window)
            samples = explorer.run_parallel(_LowerJob(g, spec, range(lo, hi + 1), caps),
                                            radii, cfg.workers)
        else:
            samples = explorer.div_sweep(g, spec, radii, caps, cfg.workers)
        if cfg.compare_graph:
            h = load_graph(cfg.compare_graph)
            compare = explorer.div_sweep(h, periodic(h, cfg.compare_word), radii, caps,
                                         cfg.workers)
    name = cfg.preset or "experiment"
    analysis.emit_csv(samples, out / f"{name}.csv")
    lines = [f"# racgdiv experiment report: {name}", effective_config_text(cfg), "",
             analysis.format_samples(samples), ""]
    if compare is not None:
        same = [a.value == b.value for a, b in zip(samples, compare)]
        lines.append(f"comparison against {cfg.compare_graph} "
                     f"periodic({cfg.compare_word}): values "
                     f"{[b.value for b in compare]} -> {'equal' if all(same) else 'DIFFER'}")
    lo, hi = cfg.fit_bounds()
    try:
        fit = analysis.loglog_fit(samples, (lo, hi))
        lines.append(f"fit (r={lo}..{hi}): {fit}")
        if cfg.expected_exponent:
            verdict = analysis.compare_exponent(fit, cfg.expected_exponent, cfg.tol)
            lines.append(f"exponent: {verdict}")
    except analysis.InsufficientData as exc:
        lines.append(f"fit skipped: {exc}")
    text = "\n".join(lines) + "\n"
    (out / f"{name}.report.txt").write_text(text, encoding="utf-8")
    stdout.write(text)
    return 0


@dataclass(frozen=True)
class _GerstenJob:
    g: object
    caps: explorer.SearchCaps

    def __call__(self, r):
        return explorer.gersten_divergence(self.g, r, self.caps)


@dataclass(frozen=True)
class _LowerJob:
    g: object
    spec: object
    window: range
    caps: explorer.SearchCaps

    def __call__(self, r):
        return explorer.lower_divergence(self.g, self.spec, r, self.window, self.caps)


# ---------------------------------------------------------------- parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _caps_args(p):
    p.add_argument("--cap-radius", type=int)
    p.add_argument("--cap-nodes", type=int, default=explorer.DEFAULT_CAP_NODES)
    p.add_argument("--stab-delta", type=int, default=2)


def _geodesic_args(p):
    p.add_argument("--geodesic", choices=("periodic", "gamma", "support"), default="periodic")
    p.add_argument("--word")
    p.add_argument("--m", type=int)
    p.add_argument("--t")
    p.add_argument("--type", dest="hyperplane_type")


def _radius_args(p):
    p.add_argument("--r", type=int)
    p.add_argument("--r-min", type=int)
    p.add_argument("--r-max", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write samples as CSV to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="racgdiv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    graph = sub.add_parser("graph", help="build, check or draw defining graphs")
    gsub = graph.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = gsub.add_parser("gen", help="print a graph in racg-graph v1 format")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p = gsub.add_parser("validate", help="parse and check a graph file")
    p.add_argument("path")
    p = gsub.add_parser("dot", help="Graphviz rendering of a defining graph")
    p.add_argument("--graph", required=True)

    word = sub.add_parser("word", help="normal forms, geodesic test, walls")
    wsub = word.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name, help_ in (("reduce", "print the ShortLex normal form"),
                        ("geodesic", "print whether the word is geodesic"),
                        ("walls", "list walls crossed by the path from e")):
        p = wsub.add_parser(name, help=help_)
        p.add_argument("--graph", required=True)
        p.add_argument("--word", required=True)

    p = sub.add_parser("ball", help="enumerate a ball in the Cayley graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--R", type=int, required=True)
    p.add_argument("--center", default="")
    p.add_argument("--cap-nodes", type=int, default=1_000_000)
    p.add_argument("--emit-dot")

    div = sub.add_parser("div", help="divergence estimators")
    dsub = div.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = dsub.add_parser("pair", help="divergence of two rays from one point")
    p.add_argument("--graph", required=True)
    p.add_argument("--alpha", required=True, help="support:<type>[:<u>,<v>] or word:<letters>")
    p.add_argument("--beta", required=True)
    _radius_args(p)
    _caps_args(p)
    p = dsub.add_parser("geodesic", help="divergence of a bi-infinite geodesic")
    p.add_argument("--graph", required=True)
    _geodesic_args(p)
    _radius_args(p)
    _caps_args(p)
    p.add_argument("--emit-dot", help="draw the optimal path at the largest radius")
    p = dsub.add_parser("lower", help="lower divergence over a window of centres")
    p.add_argument("--graph", required=True)
    _geodesic_args(p)
    _radius_args(p)
    _caps_args(p)
    p.add_argument("--window", default="-10:10", help="lo:hi; write --window=-3:3 for a negative lo")
    p = dsub.add_parser("gersten", help="divergence of the whole space")
    p.add_argument("--graph", required=True)
    _radius_args(p)
    _caps_args(p)

    p = sub.add_parser("fit", help="log-log fit of samples from a CSV file")
    p.add_argument("csv")
    p.add_argument("--fit-range")
    p.add_argument("--expected-exponent")
    p.add_argument("--tol", type=float, default=0.5)

    p = sub.add_parser("experiment", help="run a preset experiment")
    p.add_argument("preset", choices=PRESETS)
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--graph")
    p.add_argument("--m", type=int)
    p.add_argument("--t")
    p.add_argument("--r-min", type=int)
    p.add_argument("--r-max", type=int)
    p.add_argument("--cap-radius", type=int)
    p.add_argument("--cap-nodes", type=int)
    p.add_argument("--stab-delta", type=int)
    p.add_argument("--fit-range")
    p.add_argument("--expected-exponent")
    p.add_argument("--tol", type=float)
    p.add_argument("--window")
    p.add_argument("--workers", type=int)
    p.add_argument("--out")
    return parser


def _radii(args) -> list[int]:
    if args.r is not None:
        return [args.r]
    if args.r_max is None:
        raise UsageError("give --r or --r-max")
    lo = 1 if args.r_min is None else args.r_min
    if args.r_max < lo:
        raise UsageError("empty radius range")
    return list(range(lo, args.r_max + 1))


def _caps(args):
    return explorer.SearchCaps(args.cap_radius, args.cap_nodes, args.stab_delta)


def _emit(samples, args, stdout):
    if args.out:
        analysis.emit_csv(samples, args.out)
    stdout.write(analysis.csv_text(samples))


def dispatch(args, stdout=sys.stdout) -> int:
    cmd, action = args.command, getattr(args, "action", None)
    if cmd == "graph":
        if action == "gen":
            text = serialize_graph(load_graph(args.graph))
            if args.out:
                Path(args.out).write_text(text, encoding="utf-8")
            else:
                stdout.write(text)
        elif action == "validate":
            g = parse_graph(Path(args.path).read_text(encoding="utf-8"))
            note = "" if g.triangle_free else " (has triangles: outside the square-complex setting)"
            stdout.write(f"ok: {len(g)} generators, {len(g.edges)} edges{note}\n")
        else:
            stdout.write(to_dot(load_graph(args.graph)))
        return 0
    if cmd == "word":
        g = load_graph(args.graph)
        if action == "reduce":
            nf = reduce(g, args.word)
            stdout.write((str(nf) or "e") + "\n")
        elif action == "geodesic":
            stdout.write(f"{str(is_geodesic_word(g, args.word)).lower()}\n")
        else:
            for wall in crossing_walls(g, identity(g), args.word):
                stdout.write(f"{wall}\n")
        return 0
    if cmd == "ball":
        g = load_graph(args.graph)
        center = reduce(g, args.center)
        b = explorer.ball(g, center, args.R, args.cap_nodes)
        for x, d in sorted(b.items(), key=lambda kv: (kv[1], kv[0].letters)):
            stdout.write(f"{d}\t{str(x) or 'e'}\n")
        if args.emit_dot:
            Path(args.emit_dot).write_text(explorer.ball_dot(g, center, args.R), encoding="utf-8")
        return 0
    if cmd == "div":
        g = load_graph(args.graph)
        caps = _caps(args)
        radii = _radii(args)
        if action == "pair":
            a, b = parse_ray(g, args.alpha), parse_ray(g, args.beta)
            samples = [explorer.div_pair(g, a, b, r, caps) for r in radii]
        elif action == "gersten":
            samples = explorer.run_parallel(_GerstenJob(g, caps), radii, args.workers)
        else:
            spec = build_geodesic(g, args.geodesic, args.word, args.m, args.t,
                                  args.hyperplane_type)
            if action == "lower":
                lo, hi = parse_range(args.window)
                samples = explorer.run_parallel(
                    _LowerJob(g, spec, range(lo, hi + 1), caps), radii, args.workers)
            else:
                samples = explorer.div_sweep(g, spec, radii, caps, args.workers)
                if args.emit_dot:
                    r = radii[-1]
                    pts = spec.vertices(-r, r)
                    res = explorer.avoidant_path(g, pts[r], r, pts[0], pts[-1], caps,
                                                 want_path=True)
                    Path(args.emit_dot).write_text(
                        explorer.ball_dot(g, pts[r], max(r - 1, 0), res.path or ()),
                        encoding="utf-8")
        _emit(samples, args, stdout)
        return 0
    if cmd == "fit":
        samples = analysis.read_csv(args.csv)
        fr = parse_range(args.fit_range) if args.fit_range else None
        fit = analysis.loglog_fit(samples, fr)
        stdout.write(f"{fit}\n")
        if args.expected_exponent:
            stdout.write(f"{analysis.compare_exponent(fit, args.expected_exponent, args.tol)}\n")
        return 0
    if cmd == "experiment":
        file_values = read_config_file(args.config) if args.config else {}
        m = args.m if args.m is not None else file_values.get("m")
        t = args.t if args.t is not None else file_values.get("t")
        cfg = experiment_preset(args.preset, None if m is None else int(m), t)
        cfg = apply_overrides(cfg, {k: v for k, v in file_values.items() if k not in ("m", "t")})
        flags = {k: getattr(args, k) for k in ("graph", "r_min", "r_max", "cap_radius",
                                                "cap_nodes", "stab_delta", "fit_range",
                                                "expected_exponent", "tol", "window",
                                                "workers", "out")}
        cfg = apply_overrides(cfg, flags)
        return run_experiment(cfg, stdout)
    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None, stdout=sys.stdout, stderr=sys.stderr) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return dispatch(args, stdout)
    except UsageError as exc:
        stderr.write(f"racgdiv: usage error: {exc}\n")
        return 2
    except (GraphError, ValueError, KeyError, explorer.CapacityError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        stderr.write(f"racgdiv: error: {msg}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
