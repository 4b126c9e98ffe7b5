"""Compile 3-CNF formulas into binary one-cluster automata.

For a formula with ``n`` variables and ``m`` clauses the automaton has states

* ``p1..pm`` forming the ``a``-cycle, and ``r1..rm`` feeding it,
* per clause ``i`` a "satisfied" chain ``ci^x1..ci^xn, ci^end`` and an
  "unsatisfied" chain ``nci^x1..nci^xn, nci^end``.

Reading a length-``n`` word from ``nci^x1`` walks clause ``i``'s chains with
letter ``a`` meaning "true" and ``b`` meaning "false"; the walk ends in
``ci^end`` exactly when the word's assignment satisfies the clause.  The
automaton is carefully synchronizing iff the formula is satisfiable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .pfa import Pfa, StateSet, Word

A, B = 0, 1
MAX_ENUM_VARS = 24


class CnfError(ValueError):
    pass


@dataclass(frozen=True)
class CnfFormula:
    """A 3-CNF formula; literals are DIMACS-style signed variable indices."""

    variable_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.variable_count < 1:
            raise CnfError("a formula needs at least one variable")
        if not self.clauses:
            raise CnfError("a formula needs at least one clause")
        normalized = []
        for idx, clause in enumerate(self.clauses, 1):
            normalized.append(_check_clause(clause, self.variable_count, idx))
        object.__setattr__(self, "clauses", tuple(normalized))

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {self.clause_count}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


Assignment = tuple[bool, ...]


def _check_clause(clause: Sequence[int], n: int, idx: int) -> tuple[int, int, int]:
    lits = tuple(int(x) for x in clause)
    if len(lits) != 3:
        raise CnfError(f"clause {idx} has {len(lits)} literals, expected exactly 3")
    for lit in lits:
        if lit == 0 or abs(lit) > n:
            raise CnfError(f"clause {idx}: literal {lit} is out of range 1..{n}")
    variables = [abs(x) for x in lits]
    if len(set(variables)) != 3:
        if set(lits) & {-x for x in lits}:
            raise CnfError(
                f"clause {idx} contains a complementary pair; such a clause is always "
                "true and should be removed before reduction"
            )
        raise CnfError(f"clause {idx} repeats a variable")
    return tuple(sorted(lits, key=abs))


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    tokens: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise CnfError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise CnfError(f"line {lineno}: malformed problem line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise CnfError(f"line {lineno}: malformed problem line {line!r}") from None
            if header[0] < 1 or header[1] < 1:
                raise CnfError(f"line {lineno}: variable and clause counts must be positive")
            continue
        if header is None:
            raise CnfError(f"line {lineno}: clause before problem line")
        for tok in line.split():
            try:
                tokens.append((int(tok), lineno))
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
    if header is None:
        raise CnfError("missing problem line 'p cnf <vars> <clauses>'")

    clauses = []
    current: list[int] = []
    for lit, lineno in tokens:
        if lit == 0:
            try:
                clauses.append(_check_clause(current, header[0], len(clauses) + 1))
            except CnfError as exc:
                raise CnfError(f"line {lineno}: {exc}") from None
            current = []
        else:
            current.append(lit)
    if current:
        raise CnfError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise CnfError(f"problem line declares {header[1]} clauses but {len(clauses)} were given")
    return CnfFormula(header[0], tuple(clauses))


def evaluate(phi: CnfFormula, e: Sequence[bool]) -> bool:
    if len(e) != phi.variable_count:
        raise ValueError(f"assignment has {len(e)} values, expected {phi.variable_count}")
    return all(any(e[abs(x) - 1] == (x > 0) for x in clause) for clause in phi.clauses)


def brute_force_sat(phi: CnfFormula) -> Optional[Assignment]:
    """Lexicographically least satisfying assignment (False < True), or None."""
    if phi.variable_count > MAX_ENUM_VARS:
        raise ValueError(f"refusing to enumerate 2^{phi.variable_count} assignments")
    for e in itertools.product((False, True), repeat=phi.variable_count):
        if evaluate(phi, e):
            return e
    return None


@dataclass(frozen=True)
class ReductionOutput:
    pfa: Pfa
    state_map: dict[str, int]
    s_init: StateSet
    s_end: StateSet
    variable_count: int
    clause_count: int

    def state_names(self) -> list[str]:
        names = [""] * self.pfa.state_count
        for name, q in self.state_map.items():
            names[q] = name
        return names

    def state(self, name: str) -> int:
        return self.state_map[name]


def _layout(n: int, m: int) -> dict[str, int]:
    names = [f"p{i}" for i in range(1, m + 1)] + [f"r{i}" for i in range(1, m + 1)]
    for i in range(1, m + 1):
        names += [f"c{i}^x{j}" for j in range(1, n + 1)] + [f"c{i}^end"]
        names += [f"nc{i}^x{j}" for j in range(1, n + 1)] + [f"nc{i}^end"]
    return {name: q for q, name in enumerate(names)}


def reduce(phi: CnfFormula) -> ReductionOutput:
    n, m = phi.variable_count, phi.clause_count
    idx = _layout(n, m)
    size = len(idx)
    assert size == 2 * m * (n + 2)
    delta: dict[tuple[int, int], int] = {}

    def put(src: str, letter: int, dst: str) -> None:
        delta[idx[src], letter] = idx[dst]

    for i in range(1, m + 1):
        put(f"p{i}", A, f"p{i % m + 1}")
        put(f"p{i}", B, f"nc{i}^x1")
        put(f"r{i}", A, f"p{i}")
        put(f"c{i}^end", A, f"r{i}")
        put(f"nc{i}^end", A, f"r{i}")
        put(f"c{i}^end", B, "p1")

        positive = {x for x in phi.clauses[i - 1] if x > 0}
        negative = {-x for x in phi.clauses[i - 1] if x < 0}
        for j in range(1, n + 1):
            nxt = f"x{j + 1}" if j < n else "end"
            put(f"nc{i}^x{j}", A, f"c{i}^{nxt}" if j in positive else f"nc{i}^{nxt}")
            put(f"nc{i}^x{j}", B, f"c{i}^{nxt}" if j in negative else f"nc{i}^{nxt}")
            put(f"c{i}^x{j}", A, f"c{i}^{nxt}")
            put(f"c{i}^x{j}", B, f"c{i}^{nxt}")

    pfa = Pfa.from_transitions(size, ("a", "b"), delta)
    s_init = StateSet.of(size, (idx[f"nc{i}^x1"] for i in range(1, m + 1)))
    s_end = StateSet.of(size, (idx[f"c{i}^end"] for i in range(1, m + 1)))
    return ReductionOutput(pfa, idx, s_init, s_end, n, m)


def assignment_to_word(phi: CnfFormula, e: Sequence[bool]) -> Word:
    if len(e) != phi.variable_count:
        raise ValueError(f"assignment has {len(e)} values, expected {phi.variable_count}")
    return tuple(A if v else B for v in e)


def word_to_assignment(w: Iterable[int]) -> Assignment:
    out = []
    for pos, letter in enumerate(w):
        if letter not in (A, B):
            raise ValueError(f"position {pos}: letter index {letter} is neither a nor b")
        out.append(letter == A)
    return tuple(out)


def extract_assignment(word: Sequence[int], variable_count: int) -> Assignment:
    """Read the assignment off a word shaped ``a^k b v b`` with ``|v| = n``."""
    k = 0
    while k < len(word) and word[k] == A:
        k += 1
    if k == len(word) or word[-1] != B or len(word) - k - 2 != variable_count:
        where = k if k < len(word) else "none"
        raise ValueError(
            f"word does not have the shape a^k b v b with |v| = {variable_count} "
            f"(length {len(word)}, first b at position {where})"
        )
    return word_to_assignment(word[k + 1:-1])


def full_sync_word(phi: CnfFormula, e: Sequence[bool]) -> Word:
    """``a^(n+3) b w_e b`` for a satisfying assignment ``e``."""
    if not evaluate(phi, e):
        raise ValueError("assignment does not satisfy the formula")
    n = phi.variable_count
    return (A,) * (n + 3) + (B,) + assignment_to_word(phi, e) + (B,)


def window_check(out: ReductionOutput) -> Optional[Word]:
    """Lexicographically least length-``n`` word mapping ``s_init`` onto ``s_end``.

    Depth-first over prefixes in ``a < b`` order.  A prefix is dropped once a
    current state cannot reach ``s_end`` in exactly the remaining number of
    letters.
    """
    n = out.variable_count
    if n > MAX_ENUM_VARS:
        raise ValueError(f"refusing to enumerate 2^{n} windows")
    pfa = out.pfa
    # can_finish[r]: states with some length-r path into s_end.
    can_finish = [out.s_end.bits]
    for _ in range(n):
        prev = can_finish[-1]
        can_finish.append(pfa.preimage_mask(prev, A) | pfa.preimage_mask(prev, B))

    target = out.s_end.bits
    prefix: list[int] = []

    def dfs(current: int) -> bool:
        remaining = n - len(prefix)
        if current & ~can_finish[remaining]:
            return False
        if remaining == 0:
            return current == target
        for letter in (A, B):
            nxt = pfa.image_mask(current, letter)
            if nxt is None:
                continue
            prefix.append(letter)
            if dfs(nxt):
                return True
            prefix.pop()
        return False

    return tuple(prefix) if dfs(out.s_init.bits) else None
