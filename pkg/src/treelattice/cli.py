"""Command-line front end.

Every command reads one graph file (or a fixture name) and writes a report to
stdout, either as aligned text or as deterministic JSON.  Diagnostics go to
stderr and each failure class has its own exit status.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .boundary import (ConsistencyError, default_word_bound, delta_spectrum,
                       full_group_pairing, radon_nikodym, ratio_set_classification)
from .completion import CompletionError, CycleCompleter, attach_loop
from .covering import ImproperPathError, SpanningData, WordError
from .graph import (DEFAULT_CIRCUIT_BUDGET, CircuitBudgetExceeded, Graph, GraphError,
                    InapplicableError, covolume_identity_check, graph_invariants, parse_graph,
                    validate_lattice_input)
from .ktheory import admissibility, ck_matrix, k_groups, letter_order, verify_ck_partition
from .report import format_rational, grid, rational, ray_json

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_INVALID = 4
EXIT_INAPPLICABLE = 5
EXIT_BUDGET = 6
EXIT_INTERNAL = 7

FIXTURE_ENV = "TREELATTICE_FIXTURES"

COMMANDS = ("validate", "invariants", "ck-matrix", "ktheory", "ck-partition", "ratio-set",
            "delta-spectrum", "busemann", "pairing", "complete-cycles", "attach-loop")


class ValidationFailed(Exception):
    def __init__(self, report):
        super().__init__("; ".join(report.violations))
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: str | None = None
    word_bound: int | None = None
    catalog_prefix: int = 3
    catalog_period: int = 4
    rounds: int = 3
    budget: int = DEFAULT_CIRCUIT_BUDGET
    format: str = "text"
    gamma: int | None = None
    word: str | None = None
    ray_prefix: str | None = None
    ray_period: str | None = None
    u: str | None = None
    v: str | None = None
    p1: str | None = None
    p2: str | None = None
    dart: str | None = None
    strategy: str = "shortest"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.format not in ("text", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        for name in ("word_bound", "catalog_prefix", "catalog_period", "rounds", "budget"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ValueError(f"{name.replace('_', '-')} must be positive")


# -- graph loading -----------------------------------------------------------------

def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("treelattice") / "fixtures"))


def resolve_graph_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    base = fixture_dir()
    for candidate in (base / name, base / f"{name}.graph"):
        if candidate.exists():
            return candidate
    raise FileNotFoundError(f"no graph file or fixture named {name!r}")


def load_graph(name: str, *, validate: bool = True) -> Graph:
    g = parse_graph(resolve_graph_path(name).read_text())
    if validate:
        report = validate_lattice_input(g)
        if not report.ok:
            raise ValidationFailed(report)
    return g


def _need_graph(cfg: RunConfig) -> Graph:
    if cfg.graph is None:
        raise ValueError(f"{cfg.command} needs a graph file")
    return load_graph(cfg.graph)


# -- commands: each returns (json payload, text lines) ----------------------------------

def cmd_validate(cfg: RunConfig):
    if cfg.graph is None:
        raise ValueError("validate needs a graph file")
    g = load_graph(cfg.graph, validate=False)
    report = validate_lattice_input(g)
    lines = [f"ok={str(report.ok).lower()}", f"connected={str(report.connected).lower()}"]
    lines += [f"degree {v}={d}" for v, d in report.degrees.items()]
    lines += [f"violation: {x}" for x in report.violations]
    return report.to_json(), lines, (EXIT_OK if report.ok else EXIT_INVALID)


def cmd_invariants(cfg: RunConfig):
    g = _need_graph(cfg)
    inv = graph_invariants(g, cfg.budget)
    data = inv.to_json(g)
    if g.is_regular():
        data["covolume"] = covolume_identity_check(g).to_json()
    lines = []
    for key in ("n0", "n1", "chi", "gamma", "bipartite", "diam", "max_circuit",
                "regular_degree", "q"):
        value = data[key]
        lines.append(f"{key}={_text(value)}")
    if inv.bipartite:
        lines.append("coloring " + " ".join(f"{v}:{c}" for v, c in data["coloring"].items()))
    else:
        lines.append("odd_circuit " + " ".join(data["odd_circuit"]))
    if "covolume" in data:
        c = data["covolume"]
        lines.append(f"covolume gamma-1={c['gamma_minus_1']} (q-1)*n0/2={c['rhs']} "
                     f"holds={_text(c['holds'])}")
    return data, lines, EXIT_OK


def _gamma(cfg: RunConfig) -> int:
    if cfg.gamma is not None:
        return cfg.gamma
    if cfg.graph is None:
        raise ValueError(f"{cfg.command} needs --gamma or a graph file")
    g = load_graph(cfg.graph)
    return g.n1 - g.n0 + 1


def _letter_names(gamma: int) -> list[str]:
    return [f"x{abs(a)}" + ("" if a > 0 else "^-1") for a in letter_order(gamma)]


def cmd_ck_matrix(cfg: RunConfig):
    gamma = _gamma(cfg)
    a = ck_matrix(gamma)
    adm = admissibility(a)
    names = _letter_names(gamma)
    data = {"gamma": gamma, "letters": names, "matrix": a,
            "irreducible": adm.irreducible, "permutation": adm.permutation, "admissible": adm.ok}
    rows = [[""] + names] + [[n] + row for n, row in zip(names, a)]
    lines = grid(rows).splitlines()
    lines.append(f"irreducible={_text(adm.irreducible)} permutation={_text(adm.permutation)}")
    return data, lines, EXIT_OK


def cmd_ktheory(cfg: RunConfig):
    inv = k_groups(_gamma(cfg))
    return inv.to_json(), [inv.describe()], EXIT_OK


def cmd_ck_partition(cfg: RunConfig):
    g = _need_graph(cfg)
    report = verify_ck_partition(g, SpanningData(g))
    data = report.to_json()
    if report.total_measure is not None:
        q1 = report.total_measure
        data["normalized_measures"] = {k: rational(v / q1) for k, v in report.measures.items()}
    lines = []
    for name in report.letters:
        line = f"Pi[{name}] = " + " | ".join(report.cylinders[name])
        if report.measures is not None:
            line += f"  mu={format_rational(report.measures[name])}"
        lines.append(line)
    lines += [f"{k}={_text(v)}" for k, v in report.checks.items()]
    lines.append(f"pairs_checked={report.pairs_checked}")
    if report.total_measure is not None:
        lines.append(f"total_measure={format_rational(report.total_measure)}")
    for bad in report.counterexamples:
        lines.append("counterexample " + json.dumps(bad, sort_keys=True))
    return data, lines, (EXIT_OK if report.ok else EXIT_INTERNAL)


def _catalog(cfg: RunConfig, sd: SpanningData):
    return sd.ray_catalog(cfg.catalog_prefix, cfg.catalog_period)


def cmd_ratio_set(cfg: RunConfig):
    g = _need_graph(cfg)
    g.branching()
    sd = SpanningData(g)
    inv = graph_invariants(g, cfg.budget)
    report = ratio_set_classification(g, sd, word_bound=cfg.word_bound,
                                      catalog=_catalog(cfg, sd), inv=inv)
    data = report.to_json(sd)
    lines = [f"type {report.classification}",
             f"q={report.q} bipartite={_text(report.bipartite)} "
             f"lambda={format_rational(report.lam)} generator_gcd={report.generator_gcd}",
             f"word_bound={report.word_bound} words={report.spectrum.words} "
             f"rays={report.spectrum.rays}"]
    for w in data["witnesses"]:
        lines.append(f"delta={w['delta']} word={w['word']} ray={_ray_text(w['ray'])} "
                     f"cylinder={w['cylinder'] or 'O'}")
    return data, lines, EXIT_OK


def cmd_delta_spectrum(cfg: RunConfig):
    g = _need_graph(cfg)
    sd = SpanningData(g)
    bound = cfg.word_bound
    if bound is None:
        bound = default_word_bound(graph_invariants(g, cfg.budget))
    spectrum = delta_spectrum(sd, bound, _catalog(cfg, sd))
    data = {"word_bound": bound, "words": spectrum.words, "rays": spectrum.rays,
            "values": spectrum.values, "gcd": spectrum.gcd}
    lines = [f"values {' '.join(map(str, spectrum.values))}", f"gcd={spectrum.gcd}",
             f"word_bound={bound} words={spectrum.words} rays={spectrum.rays}"]
    return data, lines, EXIT_OK


def cmd_busemann(cfg: RunConfig):
    g = _need_graph(cfg)
    sd = SpanningData(g)
    w = sd.parse_word(cfg.word or "")
    if cfg.ray_period is not None:
        rays = [sd.make_ray(g.parse_path(cfg.ray_prefix or ""), g.parse_path(cfg.ray_period))]
    else:
        rays = list(_catalog(cfg, sd))
    regular = g.is_regular()
    data = {"word": sd.format_word(w), "translation_length": None, "fixed_ends": None}
    lines = [f"word {sd.format_word(w)}"]
    if w:
        attracting, repelling = sd.fixed_ends(w)
        data["translation_length"] = sd.translation_length(w)
        data["fixed_ends"] = {"attracting": ray_json(g, attracting),
                              "repelling": ray_json(g, repelling)}
        lines.append(f"translation_length={data['translation_length']}")
        lines.append(f"attracting {_ray_text(data['fixed_ends']['attracting'])}")
        lines.append(f"repelling {_ray_text(data['fixed_ends']['repelling'])}")
    values = []
    for r in rays:
        delta = sd.busemann(w, r)
        entry = {"ray": ray_json(g, r), "delta": delta}
        text = f"delta={delta} ray={_ray_text(entry['ray'])}"
        if regular:
            rn = radon_nikodym(sd, w, r)
            entry["radon_nikodym"] = rational(rn)
            text += f" rn={format_rational(rn)}"
        values.append(entry)
        lines.append(text)
    data["values"] = values
    return data, lines, EXIT_OK


def cmd_pairing(cfg: RunConfig):
    g = _need_graph(cfg)
    g.branching()
    if cfg.u is None or cfg.v is None:
        raise ValueError("pairing needs --u and --v")
    sd = SpanningData(g)
    u, v = sd.lift_path(g.parse_path(cfg.u)), sd.lift_path(g.parse_path(cfg.v))
    table = full_group_pairing(g, u, v, cfg.rounds, sd, CycleCompleter(g, sd.root),
                               strategy=cfg.strategy)
    data = table.to_json(sd)
    data["strategy"] = cfg.strategy
    lines = [f"u={data['u']} v={data['v']} q={table.q} K={table.K} "
             f"mu(u)={format_rational(table.total)}"]
    for j, left in enumerate(table.uncovered, 1):
        lines.append(f"round {j}: uncovered={format_rational(left)} "
                     f"bound={format_rational(table.bound(j))}")
    for t in data["triples"]:
        lines.append(f"{t['source']} -> {t['target']} by {t['word']} "
                     f"mu={t['measure']['num']}/{t['measure']['den']} k={t['k']}")
    return data, lines, EXIT_OK


def cmd_complete_cycles(cfg: RunConfig):
    g = _need_graph(cfg)
    if cfg.p1 is None or cfg.p2 is None:
        raise ValueError("complete-cycles needs --p1 and --p2")
    p1, p2 = g.parse_path(cfg.p1), g.parse_path(cfg.p2)
    for p in (p1, p2):
        if not g.is_consecutive(0, p):
            raise ImproperPathError("path is not consecutive from the base vertex")
    completer = CycleCompleter(g, 0, graph_invariants(g, cfg.budget))
    c1, c2, cert = completer.complete(p1, p2)
    data = {"C1": g.format_path(c1), "C2": g.format_path(c2),
            "certificate": cert.to_json(g)}
    lines = [f"C1 = {data['C1']}", f"C2 = {data['C2']}",
             f"case={cert.case} s={cert.s} k={cert.k} K={cert.K}"]
    if cert.search_fallback:
        lines.append("search_fallback=true")
    return data, lines, EXIT_OK


def cmd_attach_loop(cfg: RunConfig):
    g = _need_graph(cfg)
    inv = graph_invariants(g, cfg.budget)
    bound = inv.diam + inv.max_circuit
    darts = [g.parse_dart(cfg.dart)] if cfg.dart else range(g.num_darts)
    rows, lines = [], []
    for d in darts:
        loop = attach_loop(g, d)
        rows.append({"dart": g.dart_label(d), "base": g.vertices[g.terminus(d)],
                     "loop": g.format_path(loop), "length": len(loop),
                     "within_bound": len(loop) <= bound})
        lines.append(f"{g.dart_label(d)}: {g.format_path(loop)} length={len(loop)} "
                     f"bound={bound} within={_text(len(loop) <= bound)}")
    return {"bound": bound, "diam": inv.diam, "max_circuit": inv.max_circuit,
            "loops": rows}, lines, EXIT_OK


DISPATCH = {
    "validate": cmd_validate, "invariants": cmd_invariants, "ck-matrix": cmd_ck_matrix,
    "ktheory": cmd_ktheory, "ck-partition": cmd_ck_partition, "ratio-set": cmd_ratio_set,
    "delta-spectrum": cmd_delta_spectrum, "busemann": cmd_busemann, "pairing": cmd_pairing,
    "complete-cycles": cmd_complete_cycles, "attach-loop": cmd_attach_loop,
}


def _text(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return "none"
    if isinstance(value, Fraction):
        return format_rational(value)
    return str(value)


def _ray_text(r: dict) -> str:
    return f"[{r['prefix']}]({r['period']})^inf"


def render(payload, lines, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    return "\n".join(lines) + "\n"


def run(cfg: RunConfig, out=None) -> int:
    """Execute one command, writing the report to ``out`` (default stdout)."""
    out = out or sys.stdout
    payload, lines, status = DISPATCH[cfg.command](cfg)
    out.write(render(payload, lines, cfg.format))
    return status


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_CIRCUIT_BUDGET,
                        help="step budget for the longest-circuit search")

    catalog = argparse.ArgumentParser(add_help=False)
    catalog.add_argument("--word-bound", type=int, default=None,
                         help="maximal word length (default max(6, diam + maxCircuit + 2))")
    catalog.add_argument("--catalog-prefix", type=int, default=3)
    catalog.add_argument("--catalog-period", type=int, default=4)

    parser = argparse.ArgumentParser(
        prog="treelattice",
        description="Exact invariants of free tree lattices given by their quotient graph.",
        epilog=f"Graph arguments may name a file or a fixture; ${FIXTURE_ENV} overrides "
               "the fixture directory.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, *parents, graph="required"):
        p = sub.add_parser(name, help=help_text, parents=[common, *parents])
        if graph == "required":
            p.add_argument("graph")
        elif graph == "optional":
            p.add_argument("graph", nargs="?")
        return p

    add("validate", "check connectivity and minimum degree")
    add("invariants", "Euler characteristic, rank, bipartiteness, diameter, circuits")
    add("ck-matrix", "Cuntz-Krieger matrix of the free group", graph="optional").add_argument(
        "--gamma", type=int)
    add("ktheory", "K-groups via Smith normal form", graph="optional").add_argument(
        "--gamma", type=int)
    add("ck-partition", "verify the Cuntz-Krieger cylinder identities")
    add("ratio-set", "ratio set and factor type", catalog)
    add("delta-spectrum", "realized Busemann values and their gcd", catalog)
    p = add("busemann", "Busemann cocycle of one word", catalog)
    p.add_argument("--word", default="1")
    p.add_argument("--ray-prefix", default=None)
    p.add_argument("--ray-period", default=None)
    p = add("pairing", "full-group pairing of two cylinders")
    p.add_argument("--u", required=True, help="dart path of the first vertex")
    p.add_argument("--v", required=True, help="dart path of the second vertex")
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--strategy", choices=("shortest", "construction"), default="shortest")
    p = add("complete-cycles", "complete two proper paths to equal-length proper cycles")
    p.add_argument("--p1", required=True)
    p.add_argument("--p2", required=True)
    add("attach-loop", "loops attached at dart termini").add_argument("--dart", default=None)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def _fail(status: int, kind: str, message: str, fmt: str) -> int:
    if fmt == "json":
        sys.stderr.write(json.dumps({"error": {"kind": kind, "message": message,
                                               "status": status}}, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"error ({kind}): {message}\n")
    return status


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    fmt = ns.format
    try:
        cfg = config_from_args(ns)
        return run(cfg)
    except ValidationFailed as exc:
        payload = exc.report.to_json()
        if fmt == "json":
            sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return _fail(EXIT_INVALID, "validation", str(exc), fmt)
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc), fmt)
    except InapplicableError as exc:
        return _fail(EXIT_INAPPLICABLE, "inapplicable", str(exc), fmt)
    except CircuitBudgetExceeded as exc:
        return _fail(EXIT_BUDGET, "budget", str(exc), fmt)
    except (ConsistencyError, CompletionError) as exc:
        return _fail(EXIT_INTERNAL, "internal", str(exc), fmt)
    except (GraphError, ImproperPathError, WordError, ValueError) as exc:
        return _fail(EXIT_INVALID, "input", str(exc), fmt)


if __name__ == "__main__":
    sys.exit(main())
