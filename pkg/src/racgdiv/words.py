"""Word problem, normal forms and walls for right-angled Coxeter groups.

Group elements are represented by their ShortLex-least geodesic word with
respect to the graph's generator order.  Internally a normal form is a
``bytes`` object holding one generator index per byte; :class:`NormalForm`
wraps it together with its graph for the public API.

Right multiplication by a generator ``s`` is the only primitive.  Scanning
the word from the right through letters that commute with ``s`` either finds
a copy of ``s`` (which is deleted) or stops at the first letter not
commuting with ``s``.  In the second case ``s`` is inserted at the first
position past that letter holding a larger generator, which keeps the word
the lexicographically least linearisation of its trace.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .presentation import DefiningGraph

_SINGLE = [bytes((i,)) for i in range(256)]


def push(w: bytes, s: int, row: Sequence[bool]) -> bytes:
    """Normal form of ``w * s`` where ``row = graph.commute[s]``."""
    j = len(w)
    while j:
        c = w[j - 1]
        if c == s:
            return w[:j - 1] + w[j:]
        if not row[c]:
            break
        j -= 1
    k = len(w)
    while j < k and w[j] < s:
        j += 1
    return w[:j] + _SINGLE[s] + w[j:]


def reduce_letters(g: DefiningGraph, letters: Iterable[int], start: bytes = b"") -> bytes:
    rows = g.commute
    w = start
    for s in letters:
        w = push(w, s, rows[s])
    return w


def inverse_letters(g: DefiningGraph, w: bytes) -> bytes:
    # the reversed word is geodesic; only the ordering needs fixing
    return reduce_letters(g, reversed(w))


def distance_letters(g: DefiningGraph, x: bytes, y: bytes) -> int:
    return len(reduce_letters(g, y, inverse_letters(g, x)))


@dataclass(frozen=True, eq=False)
class NormalForm:
    graph: DefiningGraph
    letters: bytes

    def __eq__(self, other):
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self.letters == other.letters and (
            self.graph is other.graph or self.graph == other.graph)

    def __hash__(self):
        return hash(self.letters)

    def __len__(self):
        return len(self.letters)

    @property
    def names(self) -> list[str]:
        return [self.graph.generators[c] for c in self.letters]

    def __str__(self):
        return render(self.graph, self.letters)

    def __repr__(self):
        return f"NormalForm({str(self)!r})"


@dataclass(frozen=True)
class WallId:
    """A wall, named by its reflection ``g s g^-1`` (always of odd length)."""

    reflection: NormalForm
    type: str

    def __str__(self):
        return f"{self.type}@[{self.reflection}]"


def render(g: DefiningGraph, letters: Iterable[int]) -> str:
    return " ".join(g.generators[c] for c in letters)


def parse_word(g: DefiningGraph, text: str) -> list[int]:
    return [g.gen_index(s) for s in text.split()]


def to_letters(g: DefiningGraph, word) -> list[int]:
    """Accept a NormalForm, a whitespace-separated string or a sequence of
    generator names/indices."""
    if isinstance(word, NormalForm):
        _same_graph(g, word.graph)
        return list(word.letters)
    if isinstance(word, str):
        return parse_word(g, word)
    return [g.gen_index(s) for s in word]


def _same_graph(g, h):
    if g is not h and g != h:
        raise ValueError("normal forms belong to different graphs")


def identity(g: DefiningGraph) -> NormalForm:
    return NormalForm(g, b"")


def reduce(g: DefiningGraph, word) -> NormalForm:
    return NormalForm(g, reduce_letters(g, to_letters(g, word)))


def is_geodesic_word(g: DefiningGraph, word) -> bool:
    letters = to_letters(g, word)
    return len(reduce_letters(g, letters)) == len(letters)


def multiply(x: NormalForm, y: NormalForm) -> NormalForm:
    _same_graph(x.graph, y.graph)
    return NormalForm(x.graph, reduce_letters(x.graph, y.letters, x.letters))


def inverse(x: NormalForm) -> NormalForm:
    return NormalForm(x.graph, inverse_letters(x.graph, x.letters))


def distance(x: NormalForm, y: NormalForm) -> int:
    _same_graph(x.graph, y.graph)
    return distance_letters(x.graph, x.letters, y.letters)


def wall_of_edge(base: NormalForm, s: str | int) -> WallId:
    g = base.graph
    i = g.gen_index(s)
    refl = reduce_letters(g, [i, *reversed(base.letters)], base.letters)
    return WallId(NormalForm(g, refl), g.generators[i])


def crossing_walls(g: DefiningGraph, start: NormalForm, word) -> list[WallId]:
    _same_graph(g, start.graph)
    rows = g.commute
    walls = []
    pos = start.letters
    for s in to_letters(g, word):
        walls.append(wall_of_edge(NormalForm(g, pos), s))
        pos = push(pos, s, rows[s])
    return walls


def _moves(word: tuple, rows, ngen: int, cap: int):
    n = len(word)
    for i in range(n - 1):
        a, b = word[i], word[i + 1]
        if a == b:
            yield word[:i] + word[i + 2:]
        elif rows[a][b]:
            yield word[:i] + (b, a) + word[i + 2:]
    if n + 2 <= cap:
        for i in range(n + 1):
            for s in range(ngen):
                yield word[:i] + (s, s) + word[i:]


def abelianization(word: Iterable[int]) -> int:
    """Bitmask of generators occurring an odd number of times."""
    mask = 0
    for s in word:
        mask ^= 1 << s
    return mask


def oracle_equal(g: DefiningGraph, u, v, budget: int = 200_000,
                 cap: int | None = None, insertions: bool = True) -> bool | None:
    """Decide ``u == v`` by brute-force closure under elementary moves.

    Moves: delete an adjacent pair ``ss``, insert ``ss`` anywhere (words stay
    at most ``cap`` long, default ``max(|u|, |v|) + 2``), swap an adjacent
    commuting pair.  Independent of the normal-form machinery.  Every move
    preserves the per-generator letter parity, so a parity mismatch is a
    conclusive ``False``.  Returns ``None`` if ``budget`` words were visited
    without reaching ``v`` or closing the orbit.

    With ``insertions=False`` only deletions and swaps are used and the two
    sets of shortest reachable words are compared.  By Tits' solution of the
    word problem those sets are exactly the reduced expressions of each
    element, so the answer is still conclusive, and far cheaper.
    """
    a = tuple(to_letters(g, u))
    b = tuple(to_letters(g, v))
    if a == b:
        return True
    if len(a) % 2 != len(b) % 2 or abelianization(a) != abelianization(b):
        return False
    if not insertions:
        ra = _shortest_descendants(a, g.commute, budget)
        rb = _shortest_descendants(b, g.commute, budget)
        if ra is None or rb is None:
            return None
        return not ra.isdisjoint(rb)
    if cap is None:
        cap = max(len(a), len(b)) + 2
    rows, ngen = g.commute, len(g)
    seen = {a}
    queue = deque([a])
    while queue:
        w = queue.popleft()
        for x in _moves(w, rows, ngen, cap):
            if x in seen:
                continue
            if x == b:
                return True
            seen.add(x)
            if len(seen) > budget:
                return None
            queue.append(x)
    return False


def _shortest_descendants(word: tuple, rows, budget: int) -> set | None:
    seen = {word}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        for x in _moves(w, rows, 0, 0):
            if x not in seen:
                seen.add(x)
                if len(seen) > budget:
                    return None
                queue.append(x)
    shortest = min(len(w) for w in seen)
    return {w for w in seen if len(w) == shortest}


def oracle_classes(g: DefiningGraph, max_len: int, cap: int) -> dict[tuple, int]:
    """Partition every word of length <= ``max_len`` by move-closure within
    words of length <= ``cap``.  Returns word -> class id.

    Exhaustive companion of :func:`oracle_equal` for small alphabets.
    """
    rows, ngen = g.commute, len(g)
    cls: dict[tuple, int] = {}
    label = 0
    for n in range(max_len + 1):
        for w in _all_words(ngen, n):
            if w in cls:
                continue
            cls[w] = label
            queue = deque([w])
            while queue:
                x = queue.popleft()
                for y in _moves(x, rows, ngen, cap):
                    if y not in cls:
                        cls[y] = label
                        queue.append(y)
            label += 1
    return {w: c for w, c in cls.items() if len(w) <= max_len}


def _all_words(ngen: int, n: int):
    return itertools.product(range(ngen), repeat=n)
