"""Careful synchronization: shortest words, witness checking, halving words.

The shortest carefully synchronizing word is a shortest path from the full
state set to a singleton in the power automaton.  Only subsets reachable from
the start are ever materialised; they are keyed by their bit mask.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .clusters import decompose
from .pfa import Pfa, StateSet, Word, _check_letter

DEFAULT_MAX_VISITED = 10**7
DEFAULT_MAX_DEPTH = 10**6


@dataclass(frozen=True)
class Limits:
    max_visited: int = DEFAULT_MAX_VISITED
    max_depth: int = DEFAULT_MAX_DEPTH


@dataclass(frozen=True)
class Found:
    word: Word
    state: int


@dataclass(frozen=True)
class NotSynchronizing:
    visited: int


@dataclass(frozen=True)
class LimitExceeded:
    visited: int
    depth: int


SearchOutcome = Union[Found, NotSynchronizing, LimitExceeded]


@dataclass(frozen=True)
class Synchronizing:
    state: int


@dataclass(frozen=True)
class NotSingleton:
    states: StateSet


@dataclass(frozen=True)
class Undefined:
    position: int
    state: int
    letter: int


VerifyOutcome = Union[Synchronizing, NotSingleton, Undefined]


class SearchLimitError(RuntimeError):
    def __init__(self, visited: int, depth: int):
        super().__init__(f"search limits exceeded after {visited} sets at depth {depth}")
        self.visited = visited
        self.depth = depth


def _bfs(
    pfa: Pfa, start: int, goal: Callable[[int], bool], limits: Limits
) -> Union[tuple[Word, int], NotSynchronizing, LimitExceeded]:
    """Breadth-first search over defined set images.

    Letters are expanded in alphabet order, so the first goal set discovered
    is reached by the lexicographically least among the shortest words.
    """
    if goal(start):
        return (), start
    parent: dict[int, Optional[tuple[int, int]]] = {start: None}
    frontier = [start]
    depth = 0
    k = pfa.letter_count
    image = pfa.image_mask
    while frontier:
        if depth >= limits.max_depth:
            return LimitExceeded(len(parent), depth)
        nxt = []
        for s in frontier:
            for a in range(k):
                t = image(s, a)
                if t is None or t in parent:
                    continue
                parent[t] = (s, a)
                if goal(t):
                    word = []
                    node = t
                    while parent[node] is not None:
                        node, letter = parent[node]
                        word.append(letter)
                    return tuple(reversed(word)), t
                if len(parent) >= limits.max_visited:
                    return LimitExceeded(len(parent), depth + 1)
                nxt.append(t)
        frontier = nxt
        depth += 1
    return NotSynchronizing(len(parent))


def shortest_sync_word(pfa: Pfa, limits: Limits = Limits()) -> SearchOutcome:
    """Lexicographically least shortest carefully synchronizing word."""
    res = _bfs(pfa, pfa.full_mask(), lambda s: s & (s - 1) == 0, limits)
    if isinstance(res, tuple):
        word, final = res
        return Found(word, final.bit_length() - 1)
    return res


def _numpy_tables(pfa: Pfa) -> Callable[[int], np.ndarray]:
    # Undefined transitions go to the sink index n, which is absorbing.
    n = pfa.state_count
    cache: dict[int, np.ndarray] = {}

    def table(letter: int) -> np.ndarray:
        arr = cache.get(letter)
        if arr is None:
            arr = np.array(
                [n if t is None else t for t in pfa.table[letter]] + [n], dtype=np.int64
            )
            cache[letter] = arr
        return arr

    return table


def verify_word(pfa: Pfa, word: Sequence[int], chunk: int = 64) -> VerifyOutcome:
    """Decide whether ``word`` carefully synchronizes ``pfa``.

    One forward pass over the word keeping the current set of states.  Letters
    are applied in blocks without per-step checks; since undefinedness is
    absorbing, a block that ends with the sink present is replayed step by
    step to locate the first blocking position.
    """
    for letter in word:
        _check_letter(pfa, letter)
    n = pfa.state_count
    table = _numpy_tables(pfa)
    cur = np.arange(n, dtype=np.int64)
    for base in range(0, len(word), chunk):
        block = word[base:base + chunk]
        start = cur
        for letter in block:
            cur = table(letter)[cur]
        if cur.size and cur.max() == n:
            cur = start
            for offset, letter in enumerate(block):
                nxt = table(letter)[cur]
                blocked = cur[nxt == n]
                if blocked.size:
                    return Undefined(base + offset, int(blocked.min()), letter)
                cur = nxt
            raise AssertionError("sink reached but no blocking step found")
        cur = np.unique(cur)
    if cur.size == 1:
        return Synchronizing(int(cur[0]))
    return NotSingleton(StateSet.of(n, (int(q) for q in cur)))


def _one_cluster_cycle(pfa: Pfa, letter: int):
    d = decompose(pfa, letter)
    if len(d.clusters) != 1:
        raise ValueError(
            f"automaton is not one-cluster for letter {pfa.alphabet[letter]!r} "
            f"({len(d.clusters)} clusters)"
        )
    return d


def find_cycle_shrinking_word(
    pfa: Pfa, letter: int, limits: Limits = Limits()
) -> Optional[Word]:
    """Shortest word defined on the cycle ``C`` of ``letter`` with ``|C.w| < |C|``.

    Returns ``None`` when the reachable part of the power automaton holds no
    smaller image.  Raises :class:`SearchLimitError` if a limit is hit first.
    """
    d = _one_cluster_cycle(pfa, letter)
    cycle = d.clusters[0].cycle
    size = len(cycle)
    mask = 0
    for q in cycle:
        mask |= 1 << q
    res = _bfs(pfa, mask, lambda s: s.bit_count() < size, limits)
    if isinstance(res, tuple):
        return res[0]
    if isinstance(res, LimitExceeded):
        raise SearchLimitError(res.visited, res.depth)
    return None


def halving_bound(n: int, cycle_length: int, word_length: int) -> float:
    return n + cycle_length * (word_length + cycle_length) / 2


def shrink_below_half(pfa: Pfa, letter: int, word: Sequence[int]) -> Word:
    """Build ``w'`` with ``|Q.w'| <= |C| // 2`` from a word shrinking the cycle.

    Start with ``a^l`` (``l`` the graph level) so the current set is the cycle.
    While the set is larger than half the cycle, prepend the fewest ``a``'s
    to ``word`` that make it strictly shrink the current set and apply it.
    A suitable rotation always exists for a set inside the cycle holding more
    than half of it, so failing to find one is a bug.
    """
    d = _one_cluster_cycle(pfa, letter)
    word = tuple(word)
    for x in word:
        _check_letter(pfa, x)
    cycle = d.clusters[0].cycle
    c = len(cycle)
    cycle_mask = 0
    for q in cycle:
        cycle_mask |= 1 << q
    level = d.graph_level
    out = [letter] * level
    current = pfa.word_image_mask(pfa.full_mask(), out)
    assert current == cycle_mask
    if c == 1:
        return tuple(out)

    shrunk = pfa.word_image_mask(cycle_mask, word)
    if shrunk is None:
        raise ValueError("word is undefined on the cycle")
    if shrunk.bit_count() >= c:
        raise ValueError("word does not shrink the cycle")

    half = c // 2
    while current.bit_count() > half:
        size = current.bit_count()
        rotated = current
        for t in range(level + c):
            image = pfa.word_image_mask(rotated, word)
            if image is not None and image.bit_count() < size:
                break
            rotated = pfa.image_mask(rotated, letter)
        else:
            raise AssertionError("no rotation shrinks a set covering more than half the cycle")
        out.extend([letter] * t)
        out.extend(word)
        current = image

    bound = halving_bound(pfa.state_count, c, len(word))
    assert len(out) <= bound, f"halving word of length {len(out)} exceeds bound {bound}"
    return tuple(out)
