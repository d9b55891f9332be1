"""Transducer data model, nondeterministic evaluation, trimming, validation.

A transducer here is a finite-state machine whose transitions each carry one
input symbol and an output string.  The same value type is used for learned
hypotheses, hand-built targets, and prefix trees.  Values are immutable after
construction and safe to share between threads.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .errors import AlphabetError


class Transition(NamedTuple):
    src: int
    symbol: str
    dst: int
    out: str


class Violation(NamedTuple):
    kind: str
    detail: str


@dataclass(frozen=True)
class Path:
    """A chained sequence of transitions starting at some designated state."""

    transitions: tuple[Transition, ...]

    @property
    def input_word(self) -> str:
        return "".join(t.symbol for t in self.transitions)

    @property
    def output_word(self) -> str:
        return "".join(t.out for t in self.transitions)

    @property
    def end(self) -> int:
        return self.transitions[-1].dst

    def states(self, start: int) -> list[int]:
        seq = [start]
        for t in self.transitions:
            seq.append(t.dst)
        return seq


class Transducer:
    """Immutable nondeterministic finite-state transducer.

    ``transitions`` is kept as a sorted tuple of unique records; at most one
    record per (src, symbol, dst) triple is legal (checked by ``validate``,
    not enforced on construction so that malformed machines can be reported).
    """

    __slots__ = (
        "states",
        "input_alphabet",
        "output_alphabet",
        "initial",
        "accepting",
        "transitions",
        "_adj",
    )

    def __init__(
        self,
        states: Iterable[int],
        input_alphabet: Iterable[str],
        output_alphabet: Iterable[str],
        initial: int,
        accepting: Iterable[int],
        transitions: Iterable[tuple],
    ):
        object.__setattr__(self, "states", frozenset(states))
        object.__setattr__(self, "input_alphabet", frozenset(input_alphabet))
        object.__setattr__(self, "output_alphabet", frozenset(output_alphabet))
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "accepting", frozenset(accepting))
        trans = tuple(sorted({Transition(*t) for t in transitions}))
        object.__setattr__(self, "transitions", trans)
        adj: dict[int, dict[str, list[tuple[int, str]]]] = {}
        for t in trans:
            adj.setdefault(t.src, {}).setdefault(t.symbol, []).append((t.dst, t.out))
        object.__setattr__(self, "_adj", adj)

    def __setattr__(self, name, value):
        raise AttributeError("Transducer is immutable")

    def __eq__(self, other):
        if not isinstance(other, Transducer):
            return NotImplemented
        return (
            self.states == other.states
            and self.input_alphabet == other.input_alphabet
            and self.output_alphabet == other.output_alphabet
            and self.initial == other.initial
            and self.accepting == other.accepting
            and self.transitions == other.transitions
        )

    def __hash__(self):
        return hash((self.initial, self.accepting, self.transitions))

    def __repr__(self):
        return (
            f"Transducer(states={len(self.states)}, "
            f"transitions={len(self.transitions)}, "
            f"accepting={sorted(self.accepting)})"
        )

    def arcs_from(self, state: int, symbol: Optional[str] = None):
        """Outgoing (symbol, dst, out) triples of a state, sorted."""
        by_sym = self._adj.get(state, {})
        if symbol is not None:
            return [(symbol, d, o) for d, o in by_sym.get(symbol, [])]
        out = []
        for sym in sorted(by_sym):
            for d, o in by_sym[sym]:
                out.append((sym, d, o))
        return out


Configuration = frozenset  # of (state, pending output) pairs


def configuration_after(t: Transducer, inp: str) -> Configuration:
    """Set of (state, pending output) pairs reachable over ``inp``.

    Starts from {(initial, "")} and folds each input symbol through every
    matching transition.
    """
    cur = {(t.initial, "")}
    for sym in inp:
        if sym not in t.input_alphabet:
            raise AlphabetError(f"symbol {sym!r} not in input alphabet")
        nxt = set()
        for state, pending in cur:
            for dst, out in t._adj.get(state, {}).get(sym, []):
                nxt.add((dst, pending + out))
        cur = nxt
    return frozenset(cur)


def transduce(t: Transducer, inp: str) -> frozenset:
    """All outputs of accepting runs over ``inp`` (empty set if rejected)."""
    conf = configuration_after(t, inp)
    return frozenset(out for state, out in conf if state in t.accepting)


def trim(t: Transducer) -> Transducer:
    """Restrict to states lying on some path from the initial state to an
    accepting state.  If nothing is accepted, the single-state empty-relation
    machine over the same alphabets is returned."""
    fwd = {t.initial}
    queue = deque([t.initial])
    while queue:
        q = queue.popleft()
        for _, dst, _ in t.arcs_from(q):
            if dst not in fwd:
                fwd.add(dst)
                queue.append(dst)
    rev: dict[int, set[int]] = {}
    for tr in t.transitions:
        rev.setdefault(tr.dst, set()).add(tr.src)
    bwd = set(t.accepting)
    queue = deque(t.accepting)
    while queue:
        q = queue.popleft()
        for src in rev.get(q, ()):
            if src not in bwd:
                bwd.add(src)
                queue.append(src)
    keep = fwd & bwd
    if t.initial not in keep:
        return Transducer(
            [t.initial], t.input_alphabet, t.output_alphabet, t.initial, [], []
        )
    return Transducer(
        keep,
        t.input_alphabet,
        t.output_alphabet,
        t.initial,
        t.accepting & keep,
        [tr for tr in t.transitions if tr.src in keep and tr.dst in keep],
    )


def validate(t: Transducer) -> list[Violation]:
    """Structural well-formedness report; empty list means no violations."""
    report: list[Violation] = []
    if t.initial not in t.states:
        report.append(Violation("initial", f"initial state {t.initial} not in states"))
    for q in sorted(t.accepting - t.states):
        report.append(Violation("accepting", f"accepting state {q} not in states"))
    seen: dict[tuple[int, str, int], str] = {}
    for tr in t.transitions:
        if tr.src not in t.states:
            report.append(Violation("endpoint", f"source {tr.src} not in states"))
        if tr.dst not in t.states:
            report.append(Violation("endpoint", f"target {tr.dst} not in states"))
        if tr.symbol not in t.input_alphabet:
            report.append(
                Violation("alphabet", f"symbol {tr.symbol!r} not in input alphabet")
            )
        for ch in tr.out:
            if ch not in t.output_alphabet:
                report.append(
                    Violation(
                        "alphabet", f"output character {ch!r} not in output alphabet"
                    )
                )
        key = (tr.src, tr.symbol, tr.dst)
        if key in seen and seen[key] != tr.out:
            report.append(
                Violation(
                    "delta",
                    f"delta not a function: {key} maps to both "
                    f"{seen[key]!r} and {tr.out!r}",
                )
            )
        seen[key] = tr.out
    return report


def renumber(t: Transducer, order: Optional[list[int]] = None) -> Transducer:
    """Relabel states as 0..n-1 following ``order`` (default: sorted ids)."""
    if order is None:
        order = sorted(t.states)
    mapping = {q: i for i, q in enumerate(order)}
    return Transducer(
        range(len(order)),
        t.input_alphabet,
        t.output_alphabet,
        mapping[t.initial],
        [mapping[q] for q in t.accepting],
        [(mapping[a.src], a.symbol, mapping[a.dst], a.out) for a in t.transitions],
    )
