"""Breadth-first search in the implicit Cayley graph and divergence estimators.

Every avoidant query is first translated so the ball is centred at the
identity; the distance to the centre is then just the normal-form length.

Band reduction.  All right descents of a Coxeter group element lie in a
finite parabolic subgroup, which for a right-angled group means they
pairwise commute.  So along a path, a vertex y that is farther from the
centre than both its neighbours ``y s`` and ``y t`` (s != t) satisfies
``y = z s t`` with ``|z| = |y| - 2``, and z is adjacent to both neighbours.
Replacing y by z keeps the length and lowers the path.  Repeating this at
the highest interior vertex shows: a shortest path outside the open
r-ball between p and q can be taken inside the band
``r <= |y| <= max(r + 1, |p|, |q|)``.  Searches therefore never leave that
band, and the capped minimum is the same for every cap at or above its top.
The same argument certifies ``INFINITE`` when the band is exhausted.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable, Iterable, Sequence

from .constructions import GeodesicSpec
from .presentation import DefiningGraph
from .words import NormalForm, inverse_letters, push, reduce_letters, render

DEFAULT_CAP_NODES = 50_000_000


class CapacityError(RuntimeError):
    """A search exceeded its node budget where no partial answer is possible."""


class InvalidQuery(ValueError):
    pass


class Status(str, enum.Enum):
    FOUND = "Found"
    NOT_FOUND = "NotFoundWithinBudget"
    INFINITE = "Infinite"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SearchCaps:
    """``cap_radius=None`` means 4r for a radius-r query."""

    cap_radius: int | None = None
    cap_nodes: int = DEFAULT_CAP_NODES
    stabilization_delta: int = 2

    def __post_init__(self):
        if self.cap_nodes < 1:
            raise ValueError("cap_nodes must be >= 1")
        if self.stabilization_delta < 0:
            raise ValueError("stabilization_delta must be >= 0")

    def radius_for(self, r: int) -> int:
        cap = 4 * r if self.cap_radius is None else self.cap_radius
        if cap < 2 * r:
            raise ValueError(f"cap_radius {cap} < 2r = {2 * r}")
        return cap


@dataclass(frozen=True)
class AvoidantResult:
    status: Status
    length: int | None
    nodes_explored: int
    cap_radius: int
    band_top: int
    path: tuple[NormalForm, ...] | None = field(default=None, compare=False, repr=False)

    @property
    def value(self):
        return self.length


@dataclass(frozen=True)
class DivergenceSample:
    r: int
    status: Status
    value: int | None
    cap_radius: int
    cap_nodes: int
    nodes_explored: int
    stabilized: bool
    min_t: int | None = None
    graph: str = ""
    geodesic: str = ""
    m: int | None = None
    t: str | None = None
    censored: tuple = field(default=(), compare=False, repr=False)
    witness: tuple = field(default=(), compare=False, repr=False)


def neighbors(x: NormalForm) -> list[NormalForm]:
    g = x.graph
    rows = g.commute
    return [NormalForm(g, push(x.letters, s, rows[s])) for s in range(len(g))]


def _ball_letters(g: DefiningGraph, center: bytes, R: int, cap_nodes: int) -> dict[bytes, int]:
    rows, n = g.commute, len(g)
    dist = {center: 0}
    frontier = [center]
    for d in range(1, R + 1):
        nxt = []
        for x in frontier:
            for s in range(n):
                y = push(x, s, rows[s])
                if y not in dist:
                    dist[y] = d
                    nxt.append(y)
        if len(dist) > cap_nodes:
            raise CapacityError(f"ball of radius {R} exceeds cap_nodes={cap_nodes}")
        frontier = sorted(nxt, key=_shortlex)
    return dist


def _shortlex(w: bytes):
    return (len(w), w)


def ball(g: DefiningGraph, center: NormalForm, R: int,
         cap_nodes: int = DEFAULT_CAP_NODES) -> dict[NormalForm, int]:
    """All elements within distance R of ``center`` with their distances."""
    if R < 0:
        raise ValueError("R must be >= 0")
    dist = _ball_letters(g, center.letters, R, cap_nodes)
    return {NormalForm(g, w): d for w, d in dist.items()}


def sphere(g: DefiningGraph, center: NormalForm, R: int,
           cap_nodes: int = DEFAULT_CAP_NODES) -> list[NormalForm]:
    """Elements at distance exactly R from ``center``, in ShortLex order."""
    dist = _ball_letters(g, b"", R, cap_nodes)
    pts = sorted((w for w, d in dist.items() if d == R), key=_shortlex)
    c = center.letters
    return [NormalForm(g, reduce_letters(g, w, c)) for w in pts]


def _band_search(g: DefiningGraph, src: bytes, r: int, top: int, cap_nodes: int,
                 target: bytes | None, keep_parents: bool = False):
    """Layered BFS from ``src`` over ``{y : r <= |y| <= top}``.

    Returns ``(dist, found, budget_hit, parents)``.  With ``target=None`` the
    whole reachable part of the region is explored.
    """
    rows, n = g.commute, len(g)
    dist = {src: 0}
    parents = {src: None} if keep_parents else None
    if src == target:
        return dist, 0, False, parents
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for x in frontier:
            for s in range(n):
                y = push(x, s, rows[s])
                if y in dist:
                    continue
                ly = len(y)
                if ly < r or ly > top:
                    continue
                dist[y] = d
                if keep_parents:
                    parents[y] = x
                if y == target:
                    return dist, d, False, parents
                nxt.append(y)
            if len(dist) > cap_nodes:
                return dist, None, True, parents
        nxt.sort(key=_shortlex)
        frontier = nxt
    return dist, None, False, parents


def avoidant_path(g: DefiningGraph, x0: NormalForm, r: int, p: NormalForm, q: NormalForm,
                  caps: SearchCaps = SearchCaps(), *, band: bool = True,
                  want_path: bool = False) -> AvoidantResult:
    """Shortest path from p to q avoiding the open ball B(x0, r).

    With ``band=False`` the whole capped annulus ``r <= d(x0, y) <=
    cap_radius`` is searched; the default restricts to the band described in
    the module docstring, which gives the same minimum.
    """
    if r < 0:
        raise InvalidQuery("radius must be >= 0")
    cap = caps.radius_for(r)
    inv = inverse_letters(g, x0.letters)
    ps = reduce_letters(g, p.letters, inv)
    qs = reduce_letters(g, q.letters, inv)
    if len(ps) < r or len(qs) < r:
        raise InvalidQuery(f"endpoints must lie outside the open ball of radius {r}")
    if r == 0:
        # nothing is forbidden, so any geodesic will do
        step = reduce_letters(g, q.letters, inverse_letters(g, p.letters))
        path = None
        if want_path:
            path, w = [p], p.letters
            for s in step:
                w = push(w, s, g.commute[s])
                path.append(NormalForm(g, w))
            path = tuple(path)
        return AvoidantResult(Status.FOUND, len(step), 1, cap, band_top=0, path=path)
    if len(ps) > cap or len(qs) > cap:
        raise InvalidQuery(f"endpoints lie beyond cap_radius={cap}")
    band_top = max(r + 1, len(ps), len(qs))
    top = min(cap, band_top) if band else cap
    dist, found, budget_hit, parents = _band_search(
        g, ps, r, top, caps.cap_nodes, qs, keep_parents=want_path)
    explored = len(dist)
    if found is not None:
        path = None
        if want_path:
            seq, w = [], qs
            while w is not None:
                seq.append(NormalForm(g, reduce_letters(g, w, x0.letters)))
                w = parents[w]
            path = tuple(reversed(seq))
        return AvoidantResult(Status.FOUND, found, explored, cap, band_top, path)
    if budget_hit or cap < band_top:
        return AvoidantResult(Status.NOT_FOUND, None, explored, cap, band_top)
    return AvoidantResult(Status.INFINITE, None, explored, cap, band_top)


def _stabilized_query(query: Callable[[SearchCaps], AvoidantResult],
                      caps: SearchCaps) -> tuple[AvoidantResult, bool]:
    first = query(caps)
    wider = replace(caps, cap_radius=first.cap_radius + caps.stabilization_delta)
    if first.status is not Status.NOT_FOUND and first.cap_radius >= first.band_top:
        # both caps contain the whole band, so the wider run searches the
        # identical region
        return first, True
    second = query(wider)
    same = (first.status == second.status and first.length == second.length
            and first.status is not Status.NOT_FOUND)
    return first, same


def _to_sample(res: AvoidantResult, r: int, caps: SearchCaps, stabilized: bool,
               spec: GeodesicSpec | None = None, **extra) -> DivergenceSample:
    meta = {}
    if spec is not None:
        meta = dict(graph=spec.graph.name, geodesic=spec.name, m=spec.m,
                    t=None if spec.t is None else str(spec.t))
    meta.update(extra)
    return DivergenceSample(r, res.status, res.length, res.cap_radius, caps.cap_nodes,
                            res.nodes_explored, stabilized, **meta)


def div_pair(g: DefiningGraph, alpha: GeodesicSpec, beta: GeodesicSpec, r: int,
             caps: SearchCaps = SearchCaps()) -> DivergenceSample:
    """Divergence of two rays with a common initial point, at radius r."""
    x0 = alpha.vertex(0)
    if beta.vertex(0) != x0:
        raise InvalidQuery("rays must share their initial point")
    p, q = alpha.vertex(r), beta.vertex(r)
    res, stab = _stabilized_query(lambda c: avoidant_path(g, x0, r, p, q, c), caps)
    return _to_sample(res, r, caps, stab, graph=g.name,
                      geodesic=f"pair[{alpha.name}|{beta.name}]")


def rho(g: DefiningGraph, gamma: GeodesicSpec, r: int, t_center: int,
        caps: SearchCaps = SearchCaps()) -> AvoidantResult:
    """Avoidant length from gamma(t-r) to gamma(t+r) around gamma(t)."""
    pts = gamma.vertices(t_center - r, t_center + r)
    return avoidant_path(g, pts[r], r, pts[0], pts[-1], caps)


def _rho_sample(g, gamma, r, caps, t_center):
    res, stab = _stabilized_query(lambda c: rho(g, gamma, r, t_center, c), caps)
    return res, stab


def div_geodesic(g: DefiningGraph, gamma: GeodesicSpec, r: int,
                 caps: SearchCaps = SearchCaps()) -> DivergenceSample:
    res, stab = _rho_sample(g, gamma, r, caps, 0)
    return _to_sample(res, r, caps, stab, gamma)


def lower_divergence(g: DefiningGraph, gamma: GeodesicSpec, r: int, window: Iterable[int],
                     caps: SearchCaps = SearchCaps(), workers: int = 1) -> DivergenceSample:
    """Minimum of rho over the centres in ``window``.

    Stabilized only if every centre resolved and stabilized.  Ties go to the
    first centre in window order.
    """
    centres = list(window)
    if not centres:
        raise InvalidQuery("window must be non-empty")
    results = run_parallel(partial(_rho_sample, g, gamma, r, caps), centres, workers)
    best, best_t = None, None
    explored, all_stable = 0, True
    for t, (res, stab) in zip(centres, results):
        explored += res.nodes_explored
        all_stable &= stab and res.status is not Status.NOT_FOUND
        if res.status is Status.FOUND and (best is None or res.length < best.length):
            best, best_t = res, t
    if best is None:
        status = Status.INFINITE if all_stable else Status.NOT_FOUND
        best = AvoidantResult(status, None, explored, caps.radius_for(r), r + 1)
    best = replace(best, nodes_explored=explored)
    return _to_sample(best, r, caps, all_stable, gamma, min_t=best_t)


def gersten_divergence(g: DefiningGraph, r: int, caps: SearchCaps = SearchCaps()) -> DivergenceSample:
    """Largest finite avoidant distance between points of the r-sphere about e.

    Pairs shown to be disconnected outside the ball are excluded; pairs left
    unresolved by the node budget are listed in ``censored``.
    """
    cap = caps.radius_for(r)
    pts = sorted((w for w, d in _ball_letters(g, b"", r, caps.cap_nodes).items() if d == r),
                 key=_shortlex)
    if len(pts) > caps.cap_nodes:
        raise CapacityError(f"sphere of radius {r} exceeds cap_nodes")
    top = min(cap, r + 1)
    certified = cap >= r + 1
    best, witness, explored, censored = 0, (pts[0], pts[0]), 0, []
    for i, x in enumerate(pts):
        dist, _, budget_hit, _ = _band_search(g, x, r, top, caps.cap_nodes, None)
        explored += len(dist)
        for y in pts[i + 1:]:
            d = dist.get(y)
            if d is None:
                if budget_hit or not certified:
                    censored.append((render(g, x), render(g, y)))
                continue
            if d > best:
                best, witness = d, (x, y)
    return DivergenceSample(
        r, Status.FOUND, best, cap, caps.cap_nodes, explored, not censored,
        graph=g.name, geodesic="gersten", censored=tuple(censored),
        witness=tuple(render(g, w) for w in witness))


def div_sweep(g: DefiningGraph, gamma: GeodesicSpec, radii: Sequence[int],
              caps: SearchCaps = SearchCaps(), workers: int = 1) -> list[DivergenceSample]:
    return run_parallel(partial(div_geodesic, g, gamma, caps=caps), radii, workers)


def run_parallel(fn, items: Sequence, workers: int = 1) -> list:
    """``[fn(x) for x in items]``, optionally on a process pool; order kept."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def ball_dot(g: DefiningGraph, center: NormalForm, R: int,
             path: Sequence[NormalForm] = (), cap_nodes: int = 100_000) -> str:
    """Graphviz rendering of B(center, R), with an optional path in red."""
    dist = _ball_letters(g, center.letters, R, cap_nodes)
    nodes = set(dist)
    for v in path:
        nodes.add(v.letters)
    on_path = {(a.letters, b.letters) for a, b in zip(path, path[1:])}
    on_path |= {(b, a) for a, b in on_path}
    rows = g.commute
    name = {w: f"n{i}" for i, w in enumerate(sorted(nodes, key=_shortlex))}
    out = ["graph cayley {", "  node [shape=circle, fontsize=8];"]
    path_nodes = {v.letters for v in path}
    for w, nid in name.items():
        label = render(g, w) or "e"
        color = ', color="red"' if w in path_nodes else ""
        out.append(f'  {nid} [label="{label}"{color}];')
    for w in sorted(nodes, key=_shortlex):
        for s in range(len(g)):
            y = push(w, s, rows[s])
            if y in name and _shortlex(w) < _shortlex(y):
                color = ', color="red", penwidth=2' if (w, y) in on_path else ""
                out.append(f'  {name[w]} -- {name[y]} [label="{g.generators[s]}"{color}];')
    out.append("}")
    return "\n".join(out) + "\n"
