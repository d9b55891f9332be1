"""Ambiguity detection on (possibly merge-aliased) transducers.

The search walks unordered state pairs of the machine squared with itself.
Pending merges are kept in a union-find and consulted when transitions are
expanded, so states identified by a merge are interchangeable without
rewriting the machine.  Two kinds of witness event are collected: a pair of
distinct same-symbol edges reconverging on one state class, and a reachable
pair of two distinct accepting classes.  Witness paths are rebuilt from
back-pointers with outputs resolved at reconstruction time, so push-backs
applied after discovery are reflected faithfully.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import Path, Transducer, Transition

RawKey = tuple  # (src, symbol, dst) of the underlying machine


class UnionFind:
    """Union-find over state ids; the representative is the least member."""

    __slots__ = ("parent", "members")

    def __init__(self, universe: Iterable[int]):
        self.parent = {q: q for q in universe}
        self.members = {q: [q] for q in universe}

    def find(self, q: int) -> int:
        root = q
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[q] != root:
            self.parent[q], q = root, self.parent[q]
        return root

    def union(self, a: int, b: int) -> int:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        keep, drop = (ra, rb) if ra < rb else (rb, ra)
        self.parent[drop] = keep
        self.members[keep].extend(self.members.pop(drop))
        return keep

    def classes(self) -> list[int]:
        return sorted(self.members)


class QuotientView:
    """The machine seen through an alias map plus an output overlay.

    The base transducer is never mutated; push-backs record new outputs in
    ``overlay`` keyed by raw (src, symbol, dst) triples.
    """

    __slots__ = ("base", "uf", "overlay", "_raw_out")

    def __init__(self, base: Transducer, uf: Optional[UnionFind] = None):
        self.base = base
        self.uf = uf if uf is not None else UnionFind(base.states)
        self.overlay: dict[RawKey, str] = {}
        self._raw_out = {
            (tr.src, tr.symbol, tr.dst): tr.out for tr in base.transitions
        }

    def find(self, q: int) -> int:
        return self.uf.find(q)

    def out(self, key: RawKey) -> str:
        return self.overlay.get(key, self._raw_out[key])

    def class_accepting(self, cls: int) -> bool:
        return any(q in self.base.accepting for q in self.uf.members[cls])

    def edges_from(self, cls: int) -> list[tuple[str, int, str, RawKey]]:
        """Distinct quotient edges (symbol, dst class, output, representative
        raw key) leaving a class, sorted."""
        seen: dict[tuple[str, int, str], RawKey] = {}
        for q in self.uf.members[cls]:
            for sym, dst, _ in self.base.arcs_from(q):
                key = (q, sym, dst)
                edge = (sym, self.uf.find(dst), self.out(key))
                if edge not in seen or key < seen[edge]:
                    seen[edge] = key
        return sorted((s, d, o, seen[(s, d, o)]) for (s, d, o) in seen)

    def incoming_edges(self, cls: int) -> set[tuple[int, str, str]]:
        """Distinct quotient edges (src class, symbol, output) entering a class."""
        found = set()
        for tr in self.base.transitions:
            if self.uf.find(tr.dst) == cls:
                key = (tr.src, tr.symbol, tr.dst)
                found.add((self.uf.find(tr.src), tr.symbol, self.out(key)))
        return found

    def preimages(self, src_cls: int, sym: str, dst_cls: int, out: str) -> list[RawKey]:
        keys = []
        for q in self.uf.members[src_cls]:
            for s, dst, _ in self.base.arcs_from(q, sym):
                key = (q, s, dst)
                if self.uf.find(dst) == dst_cls and self.out(key) == out:
                    keys.append(key)
        return keys

    def initial_class(self) -> int:
        return self.uf.find(self.base.initial)

    def materialize(self) -> Transducer:
        """Collapse aliases and overlay into a fresh transducer."""
        classes = self.uf.classes()
        transitions = []
        for cls in classes:
            for sym, dst, out, _ in self.edges_from(cls):
                transitions.append((cls, sym, dst, out))
        accepting = [cls for cls in classes if self.class_accepting(cls)]
        return Transducer(
            classes,
            self.base.input_alphabet,
            self.base.output_alphabet,
            self.initial_class(),
            accepting,
            transitions,
        )


@dataclass(frozen=True)
class AmbiguousPathPair:
    """Two distinct same-input transition sequences from the initial state."""

    path_a: Path
    path_b: Path
    raw_a: tuple[RawKey, ...]
    raw_b: tuple[RawKey, ...]

    def __post_init__(self):
        assert self.path_a.input_word == self.path_b.input_word
        assert self.path_a.transitions != self.path_b.transitions


def _pair(x: int, y: int) -> tuple[int, int]:
    return (x, y) if x <= y else (y, x)


class PairSearchState:
    """Reachable unordered class pairs of the squared machine, with
    back-pointers and pending witness events."""

    def __init__(self, view: QuotientView):
        self.view = view
        root = _pair(view.initial_class(), view.initial_class())
        self.reached: dict[tuple[int, int], int] = {root: 0}
        self.backptr: dict[tuple[int, int], Optional[tuple]] = {root: None}
        self.frontier: deque = deque([root])
        self.events: list[tuple] = []
        self._cursor = 0

    # -- exploration ------------------------------------------------------

    def _discover(self, pair, parent, sym, raw1, raw2):
        if pair not in self.reached:
            self.reached[pair] = len(self.reached)
            self.backptr[pair] = (parent, sym, raw1, raw2)
            self.frontier.append(pair)
            p, q = pair
            if p != q and self.view.class_accepting(p) and self.view.class_accepting(q):
                self.events.append(("accept", pair))

    def expand_one(self) -> None:
        view = self.view
        pair = self.frontier.popleft()
        p, q = _pair(view.find(pair[0]), view.find(pair[1]))
        pair = (p, q)
        if pair not in self.reached:
            return  # stale frontier entry
        edges_p = view.edges_from(p)
        if p == q:
            for i, e1 in enumerate(edges_p):
                for e2 in edges_p[i:]:
                    if e1[0] != e2[0]:
                        continue
                    self._step(pair, e1, e2, diverging=e1 != e2)
        else:
            edges_q = view.edges_from(q)
            for e1 in edges_p:
                for e2 in edges_q:
                    if e1[0] != e2[0]:
                        continue
                    self._step(pair, e1, e2, diverging=True)

    def _step(self, pair, e1, e2, diverging: bool) -> None:
        sym, d1, _, raw1 = e1
        _, d2, _, raw2 = e2
        if diverging and d1 == d2:
            self.events.append(("reconverge", pair, sym, raw1, raw2))
        self._discover(_pair(d1, d2), pair, sym, raw1, raw2)

    def explore(self) -> None:
        while self.frontier:
            self.expand_one()

    # -- incremental update ------------------------------------------------

    def merge_update(self, keep: int, drop: int) -> "PairSearchState":
        """Fold ``drop`` into ``keep`` and re-seed every pair whose expansion
        may have changed: pairs touching the merged class and pairs with an
        edge into it."""
        view = self.view
        rep = view.uf.union(keep, drop)
        old = sorted(self.reached.items(), key=lambda kv: kv[1])
        self.reached = {}
        self.backptr, old_back = {}, self.backptr
        for pair, idx in old:
            canon = _pair(view.find(pair[0]), view.find(pair[1]))
            if canon not in self.reached:
                self.reached[canon] = idx
                self.backptr[canon] = old_back[pair]
        reseed = []
        for pair in self.reached:
            p, q = pair
            if rep in pair:
                reseed.append(pair)
                continue
            for cls in {p, q}:
                if any(d == rep for _, d, _, _ in view.edges_from(cls)):
                    reseed.append(pair)
                    break
        for pair in reseed:
            self.frontier.append(pair)
            p, q = pair
            if p != q and view.class_accepting(p) and view.class_accepting(q):
                self.events.append(("accept", pair))
        return self

    # -- witness extraction -------------------------------------------------

    def _chain(self, pair) -> Optional[list[tuple]]:
        view = self.view
        steps = []
        cur = _pair(view.find(pair[0]), view.find(pair[1]))
        while True:
            entry = self.backptr.get(cur)
            if entry is None:
                if cur in self.backptr:
                    break
                return None
            parent, sym, raw1, raw2 = entry
            steps.append((sym, raw1, raw2))
            cur = _pair(view.find(parent[0]), view.find(parent[1]))
        steps.reverse()
        return steps

    def _thread(self, steps) -> Optional[tuple[list, list, list, list]]:
        """Assign each step's two raw edges to two coherent sides."""
        view = self.view
        start = view.initial_class()
        sa = sb = start
        path_a, path_b, keys_a, keys_b = [], [], [], []
        for sym, raw1, raw2 in steps:
            c1 = (view.find(raw1[0]), view.find(raw1[2]), view.out(raw1))
            c2 = (view.find(raw2[0]), view.find(raw2[2]), view.out(raw2))
            if c1[0] == sa and c2[0] == sb:
                pass
            elif c2[0] == sa and c1[0] == sb:
                raw1, raw2, c1, c2 = raw2, raw1, c2, c1
            else:
                return None  # stale chain
            path_a.append(Transition(sa, sym, c1[1], c1[2]))
            path_b.append(Transition(sb, sym, c2[1], c2[2]))
            keys_a.append(raw1)
            keys_b.append(raw2)
            sa, sb = c1[1], c2[1]
        return path_a, path_b, keys_a, keys_b

    def _acceptance_extension(self, cls: int) -> Optional[list[tuple]]:
        """Shortest quotient path from ``cls`` to an accepting class, as
        (Transition, raw key) pairs; breadth-first, ties by edge order."""
        view = self.view
        if view.class_accepting(cls):
            return []
        prev: dict[int, tuple] = {cls: None}
        queue = deque([cls])
        goal = None
        while queue and goal is None:
            cur = queue.popleft()
            for sym, dst, out, raw in view.edges_from(cur):
                if dst in prev:
                    continue
                prev[dst] = (cur, sym, dst, out, raw)
                if view.class_accepting(dst):
                    goal = dst
                    break
                queue.append(dst)
        if goal is None:
            return None
        ext = []
        node = goal
        while prev[node] is not None:
            cur, sym, dst, out, raw = prev[node]
            ext.append((Transition(cur, sym, dst, out), raw))
            node = cur
        ext.reverse()
        return ext

    def _build_witness(self, event) -> Optional[AmbiguousPathPair]:
        view = self.view
        if event[0] == "accept":
            pair = event[1]
            p, q = view.find(pair[0]), view.find(pair[1])
            if p == q:
                return None
            if not (view.class_accepting(p) and view.class_accepting(q)):
                return None
            steps = self._chain(pair)
            if steps is None:
                return None
            threaded = self._thread(steps)
            if threaded is None:
                return None
            path_a, path_b, keys_a, keys_b = threaded
        else:
            _, parent, sym, raw1, raw2 = event
            c1 = (view.find(raw1[0]), view.find(raw1[2]), view.out(raw1))
            c2 = (view.find(raw2[0]), view.find(raw2[2]), view.out(raw2))
            if c1 == c2:
                return None  # edges fused since discovery
            if c1[1] != c2[1]:
                return None
            steps = self._chain(parent)
            if steps is None:
                return None
            threaded = self._thread(steps)
            if threaded is None:
                return None
            path_a, path_b, keys_a, keys_b = threaded
            sa = path_a[-1].dst if path_a else view.initial_class()
            sb = path_b[-1].dst if path_b else view.initial_class()
            if c1[0] == sa and c2[0] == sb:
                pass
            elif c2[0] == sa and c1[0] == sb:
                raw1, raw2, c1, c2 = raw2, raw1, c2, c1
            else:
                return None
            path_a.append(Transition(sa, sym, c1[1], c1[2]))
            path_b.append(Transition(sb, sym, c2[1], c2[2]))
            keys_a.append(raw1)
            keys_b.append(raw2)
            ext = self._acceptance_extension(c1[1])
            if ext is None:
                return None
            for tr, raw in ext:
                path_a.append(tr)
                path_b.append(tr)
                keys_a.append(raw)
                keys_b.append(raw)
        if tuple(path_a) == tuple(path_b):
            return None
        return AmbiguousPathPair(
            Path(tuple(path_a)), Path(tuple(path_b)), tuple(keys_a), tuple(keys_b)
        )

    def next_witness(self) -> Optional[AmbiguousPathPair]:
        """Consume events (expanding as needed) until a valid witness or
        exhaustion."""
        while True:
            while self._cursor < len(self.events):
                event = self.events[self._cursor]
                self._cursor += 1
                witness = self._build_witness(event)
                if witness is not None:
                    return witness
            if self.frontier:
                self.expand_one()
            else:
                return None


def square_reach(t: Transducer, aliases=None) -> PairSearchState:
    """Fully explored pair search over ``t`` with the given merge map
    (a mapping from state to state, or an iterable of (a, b) pairs)."""
    view = QuotientView(t)
    if aliases:
        items = aliases.items() if hasattr(aliases, "items") else aliases
        for a, b in items:
            view.uf.union(a, b)
    st = PairSearchState(view)
    st.explore()
    return st


def merge_update(st: PairSearchState, keep: int, drop: int) -> PairSearchState:
    """Record a merge and re-seed the search; exploration is resumed lazily
    (call ``explore`` or ``next_witness``)."""
    return st.merge_update(keep, drop)


def find_ambiguity(t: Transducer, st: PairSearchState) -> Optional[AmbiguousPathPair]:
    """First valid witness of ambiguity in discovery order, if any.

    ``st`` must be fully explored; the scan does not consume events.
    """
    st.explore()
    for event in st.events:
        witness = st._build_witness(event)
        if witness is not None:
            return witness
    return None
