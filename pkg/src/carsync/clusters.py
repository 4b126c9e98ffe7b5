"""Functional-graph structure of a total letter.

A letter defined on every state induces a graph with out-degree one.  Each
weakly connected component (a *cluster*) holds one cycle with in-trees hanging
off it; the *level* of a state is its distance to that cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .pfa import Pfa, _check_letter, is_total, total_letters


class NotTotalError(ValueError):
    """Raised when cluster structure is requested for a partial letter."""

    def __init__(self, letter_name: str, state: int):
        super().__init__(f"letter {letter_name!r} is undefined on state {state}")
        self.letter_name = letter_name
        self.state = state


@dataclass(frozen=True)
class Cluster:
    cycle: tuple[int, ...]
    tree_parents: dict[int, int] = field(default_factory=dict)

    @property
    def states(self) -> frozenset[int]:
        return frozenset(self.cycle) | frozenset(self.tree_parents)


@dataclass(frozen=True)
class ClusterDecomposition:
    letter: int
    clusters: tuple[Cluster, ...]
    state_to_cluster: tuple[int, ...]
    level: tuple[int, ...]
    graph_level: int

    def cycle_states(self) -> frozenset[int]:
        return frozenset(q for c in self.clusters for q in c.cycle)

    def cycle_of(self, q: int) -> tuple[int, ...]:
        return self.clusters[self.state_to_cluster[q]].cycle

    def summary(self) -> dict:
        return {
            "letter": self.letter,
            "cluster_count": len(self.clusters),
            "cycle_lengths": [len(c.cycle) for c in self.clusters],
            "cycles": [list(c.cycle) for c in self.clusters],
            "levels": list(self.level),
            "graph_level": self.graph_level,
        }


def decompose(pfa: Pfa, letter: int) -> ClusterDecomposition:
    _check_letter(pfa, letter)
    n = pfa.state_count
    succ = pfa.table[letter]
    for q, t in enumerate(succ):
        if t is None:
            raise NotTotalError(pfa.alphabet[letter], q)

    # Walk from each unvisited state; a walk that meets its own trail closes a cycle.
    on_cycle = [False] * n
    mark = [0] * n  # 0 unseen, otherwise id of the walk that saw it
    for start in range(n):
        if mark[start]:
            continue
        walk_id = start + 1
        q = start
        while not mark[q]:
            mark[q] = walk_id
            q = succ[q]
        if mark[q] == walk_id:
            p = q
            while True:
                on_cycle[p] = True
                p = succ[p]
                if p == q:
                    break

    preds: list[list[int]] = [[] for _ in range(n)]
    for q, t in enumerate(succ):
        preds[t].append(q)

    # Reverse BFS from cycle states assigns levels and cluster roots.
    level = [-1] * n
    root = [-1] * n
    queue = deque()
    for q in range(n):
        if on_cycle[q]:
            level[q] = 0
            root[q] = q
            queue.append(q)
    while queue:
        p = queue.popleft()
        for q in preds[p]:
            if level[q] < 0:
                level[q] = level[p] + 1
                root[q] = root[p]
                queue.append(q)

    seen_cycle = [False] * n
    cycle_list = []
    for q in range(n):
        if on_cycle[q] and not seen_cycle[q]:
            cyc = [q]
            seen_cycle[q] = True
            p = succ[q]
            while p != q:
                cyc.append(p)
                seen_cycle[p] = True
                p = succ[p]
            cycle_list.append(tuple(cyc))  # q is the minimum: scanned in index order

    cycle_id = {}
    for i, cyc in enumerate(cycle_list):
        for q in cyc:
            cycle_id[q] = i
    members: list[list[int]] = [[] for _ in cycle_list]
    for q in range(n):
        members[cycle_id[root[q]]].append(q)
    # Clusters ordered by smallest member.
    order = sorted(range(len(cycle_list)), key=lambda i: members[i][0])
    clusters = []
    state_to_cluster = [0] * n
    for new_id, i in enumerate(order):
        parents = {q: succ[q] for q in members[i] if not on_cycle[q]}
        clusters.append(Cluster(cycle_list[i], parents))
        for q in members[i]:
            state_to_cluster[q] = new_id

    return ClusterDecomposition(
        letter=letter,
        clusters=tuple(clusters),
        state_to_cluster=tuple(state_to_cluster),
        level=tuple(level),
        graph_level=max(level),
    )


def is_one_cluster(pfa: Pfa, letter: int) -> bool:
    if not is_total(pfa, letter):
        return False
    return len(decompose(pfa, letter).clusters) == 1


def cycle_distance(d: ClusterDecomposition, p: int, q: int) -> int:
    """Shortest rotation distance between two states of the same cycle."""
    if d.level[p] != 0 or d.level[q] != 0:
        raise ValueError("both states must lie on a cycle")
    if d.state_to_cluster[p] != d.state_to_cluster[q]:
        raise ValueError("states lie on different cycles")
    cyc = d.clusters[d.state_to_cluster[p]].cycle
    i, j = cyc.index(p), cyc.index(q)
    k1 = (j - i) % len(cyc)
    return min(k1, (i - j) % len(cyc))


@dataclass
class LetterCheck:
    letter: int
    cycle_length: int
    covering_letters: list[int]

    @property
    def ok(self) -> bool:
        return bool(self.covering_letters)


@dataclass
class PrerequisiteReport:
    """Necessary conditions for careful synchronization.

    ``verdict`` is ``"not carefully synchronizing"`` when some condition fails
    (each failure is a proof), ``"synchronizing (empty word)"`` for a
    one-state automaton, and ``"undetermined"`` otherwise.
    """

    total_letters: list[int]
    letter_checks: list[LetterCheck]
    violations: list[str]
    verdict: str

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self, pfa: Optional[Pfa] = None) -> dict:
        name = (lambda x: pfa.alphabet[x]) if pfa else (lambda x: x)
        return {
            "total_letters": [name(x) for x in self.total_letters],
            "cycle_checks": [
                {
                    "letter": name(c.letter),
                    "cycle_length": c.cycle_length,
                    "covering_letters": [name(x) for x in c.covering_letters],
                    "ok": c.ok,
                }
                for c in self.letter_checks
            ],
            "violations": self.violations,
            "verdict": self.verdict,
        }


def sync_prerequisites(pfa: Pfa) -> PrerequisiteReport:
    if pfa.state_count == 1:
        return PrerequisiteReport(total_letters(pfa), [], [], "synchronizing (empty word)")
    totals = total_letters(pfa)
    violations = []
    checks = []
    if not totals:
        violations.append("no letter is defined on every state")
    elif len(totals) == 1:
        a = totals[0]
        d = decompose(pfa, a)
        if len(d.clusters) == 1 and len(d.clusters[0].cycle) > 1:
            cyc_mask = 0
            for q in d.clusters[0].cycle:
                cyc_mask |= 1 << q
            covering = [
                b for b in range(pfa.letter_count)
                if b != a and cyc_mask & ~pfa.defined_mask(b) == 0
            ]
            checks.append(LetterCheck(a, len(d.clusters[0].cycle), covering))
            if not covering:
                violations.append(
                    f"only letter {pfa.alphabet[a]!r} is defined on the whole {pfa.alphabet[a]!r}-cycle"
                )
    verdict = "not carefully synchronizing" if violations else "undetermined"
    return PrerequisiteReport(totals, checks, violations, verdict)
