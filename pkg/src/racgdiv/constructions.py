"""Explicit words and bi-infinite geodesics in the Gamma_m groups.

Exponents ``t > 1`` are rationals (:class:`fractions.Fraction`) so that
``floor(i ** (t - 1))`` is computed exactly with integer roots.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count, cycle, islice
from typing import Iterator

from .presentation import DefiningGraph, GraphError, link
from .words import NormalForm, push, reduce_letters, render


class UnsupportedSupport(GraphError):
    """The hyperplane support does not have a rank-2 link to travel along."""


def exponent(t) -> Fraction:
    """Coerce ``t`` (Fraction, int, or ``"p/q"`` string) to a rational > 1."""
    if isinstance(t, str):
        t = Fraction(t.strip())
    elif isinstance(t, float):
        raise TypeError("float exponents are not exact; pass a Fraction or 'p/q'")
    t = Fraction(t)
    if t <= 1:
        raise GraphError(f"exponent t must exceed 1, got {t}")
    return t


def iroot(n: int, k: int) -> int:
    """Largest integer x with x**k <= n."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if n < 2 or k == 1:
        return n
    x = 1 << -(-n.bit_length() // k)  # upper bound
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def floor_power(i: int, t) -> int:
    """Exact ``floor(i ** (t - 1))`` for integer ``i >= 1``."""
    if i < 1:
        raise ValueError("floor_power needs i >= 1")
    t = exponent(t)
    e = t - 1
    return iroot(i ** e.numerator, e.denominator)


def f_t(n: int, t) -> int:
    """Sum of ``floor_power(i, t)`` for i = 1..n."""
    if n < 1:
        raise ValueError("f_t needs n >= 1")
    t = exponent(t)
    return sum(floor_power(i, t) for i in range(1, n + 1))


def word_w(m: int, i: int, t) -> list[str]:
    """The block ``(a_m b_m)(a_m b_2)^floor(i^(t-1))`` as generator names."""
    if m < 3:
        raise GraphError(f"word_w needs m >= 3 (b_2 and b_m must differ), got {m}")
    if i < 1:
        raise GraphError(f"word_w needs i >= 1, got {i}")
    am, bm = f"a_{m}", f"b_{m}"
    return [am, bm] + [am, "b_2"] * floor_power(i, t)


@dataclass(frozen=True)
class GeodesicSpec:
    """A unit-speed path through the Cayley graph, indexed by integers.

    ``kind`` is ``"periodic"``, ``"gamma"`` or ``"support"``.  Rays (the
    support kind) are only defined for ``n >= 0``.
    """

    kind: str
    graph: DefiningGraph
    word: tuple[str, ...] = ()
    m: int | None = None
    t: Fraction | None = None
    base: bytes = b""
    hyperplane_type: str | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def name(self) -> str:
        if self.kind == "periodic":
            return "periodic(" + " ".join(self.word) + ")"
        if self.kind == "gamma":
            return f"gamma(m={self.m},t={self.t})"
        return f"support({self.hyperplane_type};{' '.join(self.word)})"

    @property
    def is_ray(self) -> bool:
        return self.kind == "support"

    def labels(self, direction: int = 1) -> Iterator[int]:
        """Edge labels leaving vertex(0) forward (+1) or backward (-1)."""
        g = self.graph
        ids = [g.gen_index(s) for s in self.word]
        if self.kind == "periodic":
            return cycle(ids if direction > 0 else ids[::-1])
        if self.kind == "support":
            if direction < 0:
                raise ValueError("support rays have no negative side")
            return cycle(ids)
        am, b2 = g.gen_index(f"a_{self.m}"), g.gen_index("b_2")
        if direction < 0:
            return cycle((b2, am))
        return self._gamma_forward(am, g.gen_index(f"b_{self.m}"), b2)

    def _gamma_forward(self, am, bm, b2):
        for i in count(1):
            yield am
            yield bm
            for _ in range(floor_power(i, self.t)):
                yield am
                yield b2

    def label_word(self, start: int, stop: int) -> list[int]:
        """Labels of the edges from vertex(start) to vertex(stop), start <= stop."""
        if start > stop:
            raise ValueError("start must not exceed stop")
        out = []
        if start < 0:
            back = list(islice(self.labels(-1), -start))
            # walking forward from vertex(start) retraces the negative side
            out += back[::-1][: stop - start]
        if stop > 0:
            lo = max(start, 0)
            out += list(islice(self.labels(1), lo, stop))
        return out

    def vertex(self, n: int) -> NormalForm:
        g = self.graph
        if n == 0:
            return NormalForm(g, self.base)
        if n < 0 and self.is_ray:
            raise ValueError("support rays are indexed by n >= 0")
        key = n
        hit = self._cache.get(key)
        if hit is None:
            labels = islice(self.labels(1 if n > 0 else -1), abs(n))
            hit = reduce_letters(g, labels, self.base)
            if len(self._cache) < 4096:
                self._cache[key] = hit
        return NormalForm(g, hit)

    def vertices(self, lo: int, hi: int) -> list[NormalForm]:
        """vertex(n) for lo <= n <= hi, computed incrementally."""
        g, rows = self.graph, self.graph.commute
        w = self.vertex(lo).letters
        out = [NormalForm(g, w)]
        for s in self.label_word(lo, hi):
            w = push(w, s, rows[s])
            out.append(NormalForm(g, w))
        return out

    def __str__(self):
        return self.name


def periodic(g: DefiningGraph, word) -> GeodesicSpec:
    names = tuple(word.split()) if isinstance(word, str) else tuple(word)
    if not names:
        raise GraphError("periodic geodesic needs a non-empty word")
    for s in names:
        g.gen_index(s)
    return GeodesicSpec("periodic", g, names)


def gamma_tm(g: DefiningGraph, m: int, t) -> GeodesicSpec:
    if m < 3:
        raise GraphError(f"gamma_{{t,m}} needs m >= 3, got {m}")
    for s in (f"a_{m}", f"b_{m}", "b_2"):
        g.gen_index(s)
    return GeodesicSpec("gamma", g, m=m, t=exponent(t))


def support_ray(g: DefiningGraph, hyperplane_type: str, base: NormalForm | None = None,
                pair: tuple[str, str] | None = None) -> GeodesicSpec:
    """Ray from ``base`` alternating two non-commuting generators of the link
    of ``hyperplane_type``; it runs inside the support of that wall.

    When the link has exactly two generators they are used.  Larger links
    need an explicit ``pair``.  The smaller generator goes first.
    """
    lk = link(g, hyperplane_type)
    if pair is None:
        if len(lk) != 2:
            raise UnsupportedSupport(
                f"link({hyperplane_type}) = {sorted(lk)} is not a pair; pass pair=")
        pair = tuple(lk)
    u, v = pair
    if u not in lk or v not in lk or u == v:
        raise UnsupportedSupport(f"{u}, {v} must be distinct generators in link({hyperplane_type})")
    iu, iv = g.gen_index(u), g.gen_index(v)
    if g.commute[iu][iv]:
        raise UnsupportedSupport(f"{u} and {v} commute; their ray would not be geodesic")
    if iv < iu:
        u, v = v, u
    start = b"" if base is None else base.letters
    return GeodesicSpec("support", g, (u, v), base=start, hyperplane_type=hyperplane_type)


def describe(spec: GeodesicSpec, lo: int, hi: int) -> str:
    return render(spec.graph, spec.label_word(lo, hi))
