"""One-cluster automata with exponentially long shortest synchronizing words.

``B_k`` has states ``c1..ck`` (indices ``0..k-1``) forming an ``a``-cycle and
``t1..tk`` (indices ``k..2k-1``) with ``t_i.a = c_i``.  Its letters
``b1..b{2^k-1}`` walk through every ``k``-element set whose ``a``-image is the
whole cycle, and ``c`` collapses the last one onto ``c1``.  The only carefully
synchronizing path is ``a b1 ... b{2^k-1} c``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .pfa import Pfa, StateSet, Word

MAX_K = 20


@dataclass(frozen=True)
class BkInstance:
    k: int
    pfa: Pfa
    family: tuple[StateSet, ...]
    expected_word: Word

    @property
    def cycle(self) -> StateSet:
        return StateSet((1 << self.k) - 1, 2 * self.k)


def _check_k(k: int) -> None:
    if not isinstance(k, int) or not 1 <= k <= MAX_K:
        raise ValueError(f"k must be an integer in [1, {MAX_K}], got {k!r}")


def state_names(k: int) -> list[str]:
    return [f"c{i}" for i in range(1, k + 1)] + [f"t{i}" for i in range(1, k + 1)]


def letter_names(k: int) -> list[str]:
    return ["a"] + [f"b{i}" for i in range(1, 2**k)] + ["c"]


def tk_family(k: int) -> list[StateSet]:
    """The sets ``T ∪ (C_k ∩ ((T_k \\ T).a).a^-1)`` for non-empty ``T ⊆ T_k``.

    Ordered by the binary encoding of ``T`` (bit ``j-1`` stands for ``t_j``).
    """
    _check_k(k)
    n = 2 * k
    cycle_mask = (1 << k) - 1
    family = []
    for code in range(1, 2**k):
        t_part = code << k
        # (T_k \ T).a = {c_j : t_j not in T}; its a-preimage inside C_k is {c_{j-1}}.
        missing = ~code & cycle_mask
        c_part = ((missing >> 1) | ((missing & 1) << (k - 1))) & cycle_mask
        family.append(StateSet(t_part | c_part, n))
    return family


def generate_bk(k: int) -> BkInstance:
    _check_k(k)
    n = 2 * k
    family = tk_family(k)
    last = 2**k  # index of letter c; b_i has index i
    rows = [[None] * n for _ in range(last + 1)]

    a = rows[0]
    for i in range(k):
        a[i] = (i + 1) % k
        a[k + i] = i

    first = family[0].members()
    for j in range(k):
        rows[1][j] = first[j]
    for i in range(1, len(family)):
        src, dst = family[i - 1].members(), family[i].members()
        row = rows[i + 1]
        for s, t in zip(src, dst):
            row[s] = t
    for s in family[-1]:
        rows[last][s] = 0

    pfa = Pfa(n, tuple(letter_names(k)), tuple(tuple(r) for r in rows))
    return BkInstance(k, pfa, tuple(family), tuple(range(last + 1)))
