"""Partial finite automata and their action on states and state sets.

States are dense indices ``0..n-1`` and letters are indices into the
alphabet.  A missing transition is stored as ``None``.  Applying a letter to a
set of states yields ``None`` ("blocked") as soon as one member has no
transition for it; that is ordinary control flow, not an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence

Word = tuple[int, ...]

_CHUNK = 8


@dataclass(frozen=True)
class StateSet:
    """A subset of ``range(capacity)`` stored as an integer bit mask."""

    bits: int
    capacity: int

    def __post_init__(self):
        if self.capacity < 0:
            raise ValueError("capacity must be non-negative")
        if self.bits < 0 or self.bits >> self.capacity:
            raise ValueError(f"members out of range for capacity {self.capacity}")

    @classmethod
    def of(cls, capacity: int, members: Iterable[int] = ()) -> "StateSet":
        bits = 0
        for q in members:
            if not 0 <= q < capacity:
                raise ValueError(f"state {q} out of range for capacity {capacity}")
            bits |= 1 << q
        return cls(bits, capacity)

    @classmethod
    def full(cls, capacity: int) -> "StateSet":
        return cls((1 << capacity) - 1, capacity)

    @classmethod
    def empty(cls, capacity: int) -> "StateSet":
        return cls(0, capacity)

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.bits)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, q: object) -> bool:
        return isinstance(q, int) and q >= 0 and bool(self.bits >> q & 1)

    def __le__(self, other: "StateSet") -> bool:
        return self.bits & ~other.bits == 0

    def __or__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.bits | other.bits, max(self.capacity, other.capacity))

    def __and__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.bits & other.bits, max(self.capacity, other.capacity))

    def __sub__(self, other: "StateSet") -> "StateSet":
        return StateSet(self.bits & ~other.bits, self.capacity)

    def issubset(self, other: "StateSet") -> bool:
        return self <= other

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self) -> str:
        return f"StateSet({set(self) or '{}'}, capacity={self.capacity})"


def iter_bits(bits: int) -> Iterator[int]:
    while bits:
        low = bits & -bits
        yield low.bit_length() - 1
        bits ^= low


@dataclass(frozen=True)
class Pfa:
    """A partial deterministic automaton.

    ``table[letter][state]`` is the target state or ``None`` when the
    transition is undefined.  Use :meth:`from_transitions` to build one from
    a ``{(state, letter): target}`` mapping.
    """

    state_count: int
    alphabet: tuple[str, ...]
    table: tuple[tuple[Optional[int], ...], ...] = field(repr=False)

    def __post_init__(self):
        n = self.state_count
        if n < 1:
            raise ValueError("an automaton needs at least one state")
        if not self.alphabet:
            raise ValueError("the alphabet must not be empty")
        if any(not isinstance(x, str) or not x for x in self.alphabet):
            raise ValueError("letter names must be non-empty strings")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("letter names must be pairwise distinct")
        if len(self.table) != len(self.alphabet):
            raise ValueError("transition table must have one row per letter")
        for letter, row in enumerate(self.table):
            if len(row) != n:
                raise ValueError(f"row for letter {self.alphabet[letter]!r} has wrong length")
            for q, t in enumerate(row):
                if t is not None and not 0 <= t < n:
                    raise ValueError(
                        f"transition ({q}, {self.alphabet[letter]!r}) targets invalid state {t}"
                    )

    @classmethod
    def from_transitions(
        cls,
        state_count: int,
        alphabet: Sequence[str],
        transitions: Mapping[tuple[int, int], int],
    ) -> "Pfa":
        rows = [[None] * state_count for _ in alphabet]
        for (q, letter), t in transitions.items():
            if not 0 <= letter < len(alphabet):
                raise ValueError(f"letter index {letter} out of range")
            if not 0 <= q < state_count:
                raise ValueError(f"state {q} out of range")
            rows[letter][q] = t
        return cls(state_count, tuple(alphabet), tuple(tuple(r) for r in rows))

    @property
    def letter_count(self) -> int:
        return len(self.alphabet)

    def transitions(self) -> dict[tuple[int, int], int]:
        return {
            (q, letter): t
            for letter, row in enumerate(self.table)
            for q, t in enumerate(row)
            if t is not None
        }

    def delta(self, q: int, letter: int) -> Optional[int]:
        return self.table[letter][q]

    def letter_index(self, name: str) -> int:
        try:
            return self._letter_lookup[name]
        except KeyError:
            raise KeyError(f"unknown letter {name!r}") from None

    def word(self, names: Iterable[str]) -> Word:
        return tuple(self.letter_index(x) for x in names)

    def word_names(self, word: Iterable[int]) -> list[str]:
        return [self.alphabet[x] for x in word]

    def full_mask(self) -> int:
        return (1 << self.state_count) - 1

    @cached_property
    def _letter_lookup(self) -> dict[str, int]:
        return {x: i for i, x in enumerate(self.alphabet)}

    @cached_property
    def _defined_masks(self) -> tuple[int, ...]:
        out = []
        for row in self.table:
            m = 0
            for q, t in enumerate(row):
                if t is not None:
                    m |= 1 << q
            out.append(m)
        return tuple(out)

    @cached_property
    def _image_tables(self) -> dict[int, list[list[int]]]:
        return {}

    def defined_mask(self, letter: int) -> int:
        return self._defined_masks[letter]

    def _chunk_tables(self, letter: int) -> list[list[int]]:
        # Per-byte lookup: image of every 8-state block under one letter.
        tables = self._image_tables.get(letter)
        if tables is None:
            row = self.table[letter]
            tables = []
            for base in range(0, self.state_count, _CHUNK):
                tab = [0] * 256
                for v in range(1, 256):
                    low = (v & -v).bit_length() - 1
                    q = base + low
                    t = row[q] if q < self.state_count else None
                    tab[v] = tab[v & (v - 1)] | (0 if t is None else 1 << t)
                tables.append(tab)
            self._image_tables[letter] = tables
        return tables

    def image_mask(self, mask: int, letter: int) -> Optional[int]:
        """Image of a bit mask under one letter, or ``None`` if blocked."""
        if mask & ~self._defined_masks[letter]:
            return None
        tables = self._chunk_tables(letter)
        out = 0
        i = 0
        while mask:
            byte = mask & 0xFF
            if byte:
                out |= tables[i][byte]
            mask >>= _CHUNK
            i += 1
        return out

    def word_image_mask(self, mask: int, word: Iterable[int]) -> Optional[int]:
        for letter in word:
            mask = self.image_mask(mask, letter)
            if mask is None:
                return None
        return mask

    def preimage_mask(self, mask: int, letter: int) -> int:
        out = 0
        for q, t in enumerate(self.table[letter]):
            if t is not None and mask >> t & 1:
                out |= 1 << q
        return out


def _check_letter(pfa: Pfa, letter: int) -> None:
    if not 0 <= letter < pfa.letter_count:
        raise ValueError(f"letter index {letter} out of range for alphabet of size {pfa.letter_count}")


def _check_set(pfa: Pfa, s: StateSet) -> None:
    if s.capacity != pfa.state_count:
        raise ValueError(f"state set capacity {s.capacity} != state count {pfa.state_count}")


def apply_letter(pfa: Pfa, s: StateSet, letter: int) -> Optional[StateSet]:
    """Return ``s.letter`` or ``None`` if the letter is undefined on some member."""
    _check_letter(pfa, letter)
    _check_set(pfa, s)
    out = pfa.image_mask(s.bits, letter)
    return None if out is None else StateSet(out, s.capacity)


def apply_word(pfa: Pfa, s: StateSet, word: Sequence[int]) -> Optional[StateSet]:
    _check_set(pfa, s)
    for letter in word:
        _check_letter(pfa, letter)
    out = pfa.word_image_mask(s.bits, word)
    return None if out is None else StateSet(out, s.capacity)


def preimage(pfa: Pfa, s: StateSet, letter: int) -> StateSet:
    """States whose ``letter`` transition is defined and lands in ``s``."""
    _check_letter(pfa, letter)
    _check_set(pfa, s)
    return StateSet(pfa.preimage_mask(s.bits, letter), s.capacity)


def is_total(pfa: Pfa, letter: int) -> bool:
    _check_letter(pfa, letter)
    return pfa.defined_mask(letter) == pfa.full_mask()


def total_letters(pfa: Pfa) -> list[int]:
    return [x for x in range(pfa.letter_count) if is_total(pfa, x)]
