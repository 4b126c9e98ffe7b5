"""Text formats: the line-oriented PFA document and Graphviz DOT export.

A PFA document looks like::

    pfa v1
    states 4
    names 0 1 2 3          # optional; defaults to the indices
    alphabet a b c
    0 a 1                  # <src> <letter> <dst>, states by name or index
    0 c 1

Pairs without a transition line are undefined.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .clusters import decompose
from .pfa import Pfa, is_total

HEADER = "pfa v1"


class PfaFormatError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class PfaDocument:
    pfa: Pfa
    state_names: tuple[str, ...]

    @classmethod
    def plain(cls, pfa: Pfa, names: Optional[Sequence[str]] = None) -> "PfaDocument":
        if names is None:
            names = [str(q) for q in range(pfa.state_count)]
        return cls(pfa, tuple(names))

    @cached_property
    def _name_lookup(self) -> dict[str, int]:
        return {name: q for q, name in enumerate(self.state_names)}

    def state_index(self, token: str) -> int:
        """Resolve a state by name, falling back to its index."""
        if token in self._name_lookup:
            return self._name_lookup[token]
        if token.isdigit() and int(token) < self.pfa.state_count:
            return int(token)
        raise KeyError(f"unknown state {token!r}")


def _valid_token(tok: str) -> bool:
    return bool(tok) and not any(ch.isspace() for ch in tok) and "#" not in tok


def parse_pfa(text: str) -> PfaDocument:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    if not lines or lines[0][1] != HEADER.split():
        raise PfaFormatError(f"expected header {HEADER!r}", lines[0][0] if lines else None)

    n = None
    names = None
    alphabet = None
    edges = []
    for lineno, parts in lines[1:]:
        key = parts[0]
        if key == "states" and n is None and not edges:
            if len(parts) < 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise PfaFormatError("'states' needs a positive integer", lineno)
            n = int(parts[1])
            if len(parts) > 2:
                if parts[2] != "names":
                    raise PfaFormatError(f"unexpected token {parts[2]!r} after state count", lineno)
                names = parts[3:]
        elif key == "names" and n is not None and names is None and not edges:
            names = parts[1:]
        elif key == "alphabet" and alphabet is None and not edges:
            alphabet = parts[1:]
            if not alphabet:
                raise PfaFormatError("empty alphabet", lineno)
            if len(set(alphabet)) != len(alphabet):
                raise PfaFormatError("duplicate letter in alphabet", lineno)
        elif len(parts) == 3 and n is not None and alphabet is not None:
            edges.append((lineno, parts))
        else:
            raise PfaFormatError(f"unexpected line {' '.join(parts)!r}", lineno)
    if n is None:
        raise PfaFormatError("missing 'states' line")
    if alphabet is None:
        raise PfaFormatError("missing 'alphabet' line")
    if names is None:
        names = [str(q) for q in range(n)]
    elif len(names) != n:
        raise PfaFormatError(f"{len(names)} state names given for {n} states")
    elif len(set(names)) != n:
        raise PfaFormatError("duplicate state name")

    doc = PfaDocument.plain(Pfa.from_transitions(n, alphabet, {}), names)
    letters = {x: i for i, x in enumerate(alphabet)}
    delta = {}
    for lineno, (src, letter, dst) in edges:
        try:
            q, t = doc.state_index(src), doc.state_index(dst)
        except KeyError as exc:
            raise PfaFormatError(exc.args[0], lineno) from None
        if letter not in letters:
            raise PfaFormatError(f"unknown letter {letter!r}", lineno)
        if (q, letters[letter]) in delta:
            raise PfaFormatError(f"duplicate transition for ({src}, {letter})", lineno)
        delta[q, letters[letter]] = t
    return PfaDocument(Pfa.from_transitions(n, alphabet, delta), tuple(names))


def serialize_pfa(pfa: Pfa, names: Optional[Sequence[str]] = None, comment: str = "") -> str:
    default = [str(q) for q in range(pfa.state_count)]
    names = list(names) if names is not None else default
    for tok in list(names) + list(pfa.alphabet):
        if not _valid_token(tok):
            raise ValueError(f"name {tok!r} cannot be written: whitespace or '#'")
    out = [HEADER]
    if comment:
        out += [f"# {line}" for line in comment.splitlines()]
    out.append(f"states {pfa.state_count}")
    if names != default:
        out.append("names " + " ".join(names))
    out.append("alphabet " + " ".join(pfa.alphabet))
    for q in range(pfa.state_count):
        for letter, row in enumerate(pfa.table):
            t = row[q]
            if t is not None:
                out.append(f"{names[q]} {pfa.alphabet[letter]} {names[t]}")
    return "\n".join(out) + "\n"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(
    pfa: Pfa,
    names: Optional[Sequence[str]] = None,
    letter: Optional[int] = None,
    title: str = "pfa",
) -> str:
    """Graphviz digraph; parallel edges share one comma-joined label.

    States on the cycles of ``letter`` (when that letter is total) are drawn
    as double circles.
    """
    names = list(names) if names is not None else [str(q) for q in range(pfa.state_count)]
    cyclic: Iterable[int] = ()
    if letter is not None and is_total(pfa, letter):
        cyclic = decompose(pfa, letter).cycle_states()
    cyclic = set(cyclic)

    labels: dict[tuple[int, int], list[str]] = defaultdict(list)
    for q in range(pfa.state_count):
        for x, row in enumerate(pfa.table):
            if row[q] is not None:
                labels[q, row[q]].append(pfa.alphabet[x])

    out = [f"digraph {_quote(title)} {{", "  rankdir=LR;"]
    for q in range(pfa.state_count):
        shape = "doublecircle" if q in cyclic else "circle"
        out.append(f"  {_quote(names[q])} [shape={shape}];")
    for (q, t), letters in labels.items():
        out.append(f"  {_quote(names[q])} -> {_quote(names[t])} [label={_quote(','.join(letters))}];")
    out.append("}")
    return "\n".join(out) + "\n"
