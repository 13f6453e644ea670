"""Defining graphs of right-angled Coxeter groups.

A defining graph has one vertex per involutive generator; two generators
commute exactly when they are joined by an edge.  Generator order is
significant: it fixes the ShortLex order used by :mod:`racgdiv.words`.

The families used throughout the package are

* ``build_gamma(m)`` -- the graphs Gamma_m on ``a_0..a_m, b_0..b_m``, and
* ``build_omega(m)`` -- the disjoint union of Gamma_2, ..., Gamma_m, whose
  group is the free product of the corresponding groups.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

HEADER = "racg-graph v1"

# Letters are stored one per byte by the word machinery.
MAX_GENERATORS = 255


class GraphError(ValueError):
    """Invalid graph construction or parameter."""


class ParseError(GraphError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class FamilyTag:
    kind: str = "Custom"  # GammaM | OmegaM | Custom
    m: int | None = None

    def __post_init__(self):
        if self.kind == "GammaM" and (self.m is None or self.m < 1):
            raise GraphError("GammaM requires m >= 1")
        if self.kind == "OmegaM" and (self.m is None or self.m < 2):
            raise GraphError("OmegaM requires m >= 2")
        if self.kind not in ("GammaM", "OmegaM", "Custom"):
            raise GraphError(f"unknown family kind {self.kind!r}")

    def __str__(self):
        if self.kind == "GammaM":
            return f"gamma:{self.m}"
        if self.kind == "OmegaM":
            return f"omega:{self.m}"
        return "custom"


@dataclass(frozen=True)
class DefiningGraph:
    """Immutable defining graph.

    ``edges`` holds index pairs ``(i, j)`` with ``i < j``.  Equality and
    hashing use the generator sequence and the edge set only.
    """

    generators: tuple[str, ...]
    edges: frozenset[tuple[int, int]]
    family: FamilyTag = field(default_factory=FamilyTag, compare=False)
    index: dict = field(init=False, repr=False, compare=False)
    commute: tuple = field(init=False, repr=False, compare=False)
    triangle_free: bool = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        gens = tuple(self.generators)
        if len(gens) > MAX_GENERATORS:
            raise GraphError(f"at most {MAX_GENERATORS} generators supported, got {len(gens)}")
        index = {}
        for i, name in enumerate(gens):
            if not isinstance(name, str) or not name or any(c.isspace() for c in name):
                raise GraphError(f"bad generator name {name!r}")
            if name in index:
                raise GraphError(f"duplicate generator {name!r}")
            index[name] = i
        n = len(gens)
        edges = set()
        for i, j in self.edges:
            if i == j:
                raise GraphError(f"self-loop at {gens[i]!r}")
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range")
            edges.add((min(i, j), max(i, j)))
        rows = [[False] * n for _ in range(n)]
        for i, j in edges:
            rows[i][j] = rows[j][i] = True
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "commute", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "triangle_free", _triangle_free(rows))

    @classmethod
    def from_names(cls, generators: Iterable[str], edges: Iterable[tuple[str, str]],
                   family: FamilyTag | None = None) -> "DefiningGraph":
        gens = tuple(generators)
        index = {g: i for i, g in enumerate(gens)}
        pairs = []
        for s, t in edges:
            if s not in index or t not in index:
                raise GraphError(f"edge {s}-{t} mentions an unknown generator")
            pairs.append((index[s], index[t]))
        return cls(gens, frozenset(pairs), family or FamilyTag())

    def __len__(self):
        return len(self.generators)

    @property
    def name(self) -> str:
        return str(self.family)

    def gen_index(self, s: str | int) -> int:
        if isinstance(s, int):
            if 0 <= s < len(self.generators):
                return s
            raise KeyError(f"generator index {s} out of range")
        try:
            return self.index[s]
        except KeyError:
            raise KeyError(f"unknown generator {s!r}") from None

    def edge_names(self) -> list[tuple[str, str]]:
        return [(self.generators[i], self.generators[j]) for i, j in sorted(self.edges)]


def _triangle_free(rows) -> bool:
    n = len(rows)
    for i in range(n):
        nbrs = [j for j in range(i + 1, n) if rows[i][j]]
        for j, k in itertools.combinations(nbrs, 2):
            if rows[j][k]:
                return False
    return True


def _gamma_names(m: int) -> list[str]:
    names = []
    for i in range(m + 1):
        names += [f"a_{i}", f"b_{i}"]
    return names


def _gamma_edges(m: int) -> list[tuple[str, str]]:
    edges = []
    for i in range(1, m + 1):
        edges += [(f"a_{i}", "a_0"), (f"a_{i}", "b_0")]
    edges += [("b_1", "a_0"), ("b_1", "b_0")]
    for j in range(2, m + 1):
        edges += [(f"b_{j}", f"a_{j - 1}"), (f"b_{j}", f"b_{j - 1}")]
    return edges


def build_gamma(m: int) -> DefiningGraph:
    """Gamma_m: generators a_0 < b_0 < a_1 < b_1 < ... < a_m < b_m.

    Edges: a_i joined to a_0 and b_0 for 1 <= i <= m; b_1 joined to a_0 and
    b_0; b_j joined to a_{j-1} and b_{j-1} for 2 <= j <= m.
    """
    if not isinstance(m, int) or m < 1:
        raise GraphError(f"build_gamma needs m >= 1, got {m!r}")
    if 2 * m + 2 > MAX_GENERATORS:
        raise GraphError(f"m={m} gives more than {MAX_GENERATORS} generators")
    g = DefiningGraph.from_names(_gamma_names(m), _gamma_edges(m), FamilyTag("GammaM", m))
    if not g.triangle_free:
        raise GraphError("internal: Gamma_m must be triangle-free")
    return g


def build_omega(m: int) -> DefiningGraph:
    """Disjoint union of Gamma_2..Gamma_m with generators named ``G{i}.{name}``."""
    if not isinstance(m, int) or m < 2:
        raise GraphError(f"build_omega needs m >= 2, got {m!r}")
    total = sum(2 * i + 2 for i in range(2, m + 1))
    if total > MAX_GENERATORS:
        raise GraphError(f"m={m} gives {total} generators (max {MAX_GENERATORS})")
    names, edges = [], []
    for i in range(2, m + 1):
        names += [f"G{i}.{s}" for s in _gamma_names(i)]
        edges += [(f"G{i}.{s}", f"G{i}.{t}") for s, t in _gamma_edges(i)]
    return DefiningGraph.from_names(names, edges, FamilyTag("OmegaM", m))


def commutes(g: DefiningGraph, s: str | int, t: str | int) -> bool:
    return g.commute[g.gen_index(s)][g.gen_index(t)]


def link(g: DefiningGraph, s: str | int) -> frozenset[str]:
    i = g.gen_index(s)
    return frozenset(g.generators[j] for j, c in enumerate(g.commute[i]) if c)


def is_triangle_free(g: DefiningGraph) -> bool:
    return _triangle_free(g.commute)


def full_subgraph(g: DefiningGraph, names: Iterable[str]) -> DefiningGraph:
    """Induced subgraph, keeping the parent's generator order."""
    keep = set(names)
    for s in keep:
        g.gen_index(s)
    gens = [s for s in g.generators if s in keep]
    edges = [(s, t) for s, t in g.edge_names() if s in keep and t in keep]
    return DefiningGraph.from_names(gens, edges)


def serialize_graph(g: DefiningGraph) -> str:
    lines = [HEADER]
    lines += [f"gen {s}" for s in g.generators]
    lines += [f"edge {s} {t}" for s, t in g.edge_names()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> DefiningGraph:
    gens: list[str] = []
    known: dict[str, int] = {}
    edges: list[tuple[int, int]] = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if not seen_header:
            if line != HEADER:
                raise ParseError(f"expected header {HEADER!r}", lineno)
            seen_header = True
            continue
        parts = line.split()
        if parts[0] == "gen" and len(parts) == 2:
            name = parts[1]
            if name in known:
                raise ParseError(f"duplicate generator {name!r}", lineno)
            known[name] = len(gens)
            gens.append(name)
        elif parts[0] == "edge" and len(parts) == 3:
            s, t = parts[1], parts[2]
            for x in (s, t):
                if x not in known:
                    raise ParseError(f"edge to unknown generator {x!r}", lineno)
            if s == t:
                raise ParseError(f"self-loop at {s!r}", lineno)
            edges.append((known[s], known[t]))
        else:
            raise ParseError(f"malformed line {raw.strip()!r}", lineno)
    if not seen_header:
        raise ParseError("empty graph file", 1)
    try:
        return DefiningGraph(tuple(gens), frozenset(edges))
    except GraphError as exc:
        raise ParseError(str(exc), 0) from exc


def load_graph(selector: str) -> DefiningGraph:
    """Resolve ``gamma:<m>``, ``omega:<m>`` or ``file:<path>``."""
    kind, _, arg = selector.partition(":")
    if kind == "gamma":
        return build_gamma(_int_arg(selector, arg))
    if kind == "omega":
        return build_omega(_int_arg(selector, arg))
    if kind == "file":
        return parse_graph(Path(arg).read_text(encoding="utf-8"))
    raise GraphError(f"bad graph selector {selector!r} (gamma:<m>|omega:<m>|file:<path>)")


def _int_arg(selector, arg):
    try:
        return int(arg)
    except ValueError:
        raise GraphError(f"bad graph selector {selector!r}") from None


def to_dot(g: DefiningGraph) -> str:
    out = ["graph defining {"]
    out += [f'  "{s}";' for s in g.generators]
    out += [f'  "{s}" -- "{t}";' for s, t in g.edge_names()]
    out.append("}")
    return "\n".join(out) + "\n"
