"""Top-level learner: empty-input side channel, prefix tree, and the
length-lexicographic double loop of merge attempts."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .core import Transducer, renumber, trim
from .errors import ConflictError
from .merge import try_merge
from .ptree import PTreeAnnotation, SampleSet, build_prefix_tree


TIE_BREAK_OUTPUT_LEX = "output-length-lex"


@dataclass
class LearnerConfig:
    max_merge_passes: int = 1
    order_tie_break: str = TIE_BREAK_OUTPUT_LEX
    emit_trace: bool = False

    def __post_init__(self):
        if self.max_merge_passes < 1:
            raise ValueError("max_merge_passes must be at least 1")
        if self.order_tie_break != TIE_BREAK_OUTPUT_LEX:
            raise ValueError(f"unknown tie-break rule {self.order_tie_break!r}")


@dataclass
class LearnedModel:
    """A learned machine plus the independently learned empty-input output."""

    machine: Transducer
    epsilon_output: Optional[str] = None


def split_epsilon(samples: Iterable[tuple[str, str]]) -> tuple[SampleSet, Optional[str]]:
    """Divert the empty-input pair to a side value, standing in the empty
    pair for it so the machine part can be learned uniformly."""
    eps: Optional[str] = None
    rest = SampleSet()
    for inp, out in samples:
        if inp == "":
            if eps is not None and eps != out:
                raise ConflictError("", eps, out)
            eps = out
        else:
            rest.insert(inp, out)
    if eps is not None:
        rest.insert("", "")
    return rest, eps


def state_order(ann: PTreeAnnotation) -> list[int]:
    """Tree states sorted by input prefix (length first, then lexicographic),
    ties broken the same way on the output prefix."""
    return sorted(ann.nodes, key=ann.sort_key)


def infer(
    samples: Iterable[tuple[str, str]],
    cfg: Optional[LearnerConfig] = None,
    trace: Optional[list] = None,
) -> LearnedModel:
    """Learn a transducer consistent with every sample.

    The outer loop walks prefix-tree states in length-lexicographic order;
    for each, the inner loop retries every earlier surviving state until a
    merge commits.  A committed merge deletes the outer state (and any states
    the cascade folded), so the outer loop only ever visits survivors.
    """
    cfg = cfg or LearnerConfig()
    if cfg.emit_trace and trace is None:
        trace = []
    sample_set, eps = split_epsilon(samples)
    tree, ann = build_prefix_tree(sample_set)
    order = state_order(ann)
    hypothesis = tree
    for _ in range(cfg.max_merge_passes):
        changed = False
        for outer in order:
            if outer not in hypothesis.states or outer == hypothesis.initial:
                continue
            for inner in order:
                if inner >= outer:
                    break
                if inner not in hypothesis.states:
                    continue
                merged = try_merge(hypothesis, inner, outer, ann, trace=trace)
                if cfg.emit_trace and trace is not None:
                    _echo_trace_entry(trace[-1])
                if merged is not None:
                    hypothesis = merged
                    changed = True
                    break
        if not changed:
            break
    hypothesis = trim(hypothesis)
    final_order = sorted(hypothesis.states, key=ann.sort_key)
    return LearnedModel(renumber(hypothesis, final_order), eps)


def _echo_trace_entry(entry: dict) -> None:
    if entry["kind"] == "merge_committed":
        a, b = entry["pair"]
        print(
            f"merge {a}+{b}: committed "
            f"({len(entry['forced'])} forced, {len(entry['push_log'])} push-backs)",
            file=sys.stderr,
        )
    else:
        a, b = entry["pair"]
        print(f"merge {a}+{b}: rejected ({entry['reason']})", file=sys.stderr)
