"""Sequential and true-concurrent flow semantics and their traces.

A true-concurrent step fires a set of enabled transitions with pairwise
disjoint presets at once.  Traces record the fired transitions together with
the markings they pass through, starting at the initial marking.
"""
import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import (ConflictError, FiringError, InvalidNetError,
                     NonDeterminismError, ReorderError, ResourceLimitError,
                     UnsafeNetError)
from .net import MAX_MARKINGS


def tc_fire(net, marking, step):
    """Fire all transitions of ``step`` simultaneously."""
    step = list(step)
    consumed = set()
    produced = set()
    for t in net.sort(step):
        pre = net.preset(t)
        if consumed & pre:
            raise ConflictError(f"{t!r} shares preset places {net.sort(consumed & pre)} with the step")
        if not pre <= marking:
            raise FiringError(f"{t!r} is not enabled")
        consumed |= pre
    for t in net.sort(step):
        post = net.postset(t)
        if produced & post:
            raise UnsafeNetError(f"step produces two tokens on {net.sort(produced & post)}")
        produced |= post
    rest = marking - consumed
    if rest & produced:
        raise UnsafeNetError(f"step puts a second token on {net.sort(rest & produced)}")
    return frozenset(rest | produced)


def max_concurrent_set(net, marking):
    """All enabled transitions, provided none of them compete for a place."""
    enabled = net.enabled(marking)
    owner = {}
    for t in enabled:
        for p in net.sort(net.preset(t)):
            if p in owner:
                raise NonDeterminismError(f"{owner[p]} and {t} both need {p}", p, (owner[p], t))
            owner[p] = t
    return frozenset(enabled)


def maximal_steps(net, marking):
    """Every maximal set of enabled transitions with pairwise disjoint presets.

    On nets where no two enabled transitions share a preset place this is the
    single set :func:`max_concurrent_set` returns.
    """
    enabled = net.enabled(marking)
    if not enabled:
        return []
    steps = []

    def extend(i, chosen, used):
        if i == len(enabled):
            cand = frozenset(chosen)
            # maximal: no skipped transition could still be added
            if all(t in cand or net.preset(t) & used for t in enabled):
                steps.append(cand)
            return
        t = enabled[i]
        pre = net.preset(t)
        if not pre & used:
            extend(i + 1, chosen + [t], used | pre)
        extend(i + 1, chosen, used)

    extend(0, [], frozenset())
    return steps


def reach_tc(net, limit=MAX_MARKINGS):
    """Markings reachable by firing maximal conflict-free steps."""
    seen = {net.initial}
    queue = deque([net.initial])
    while queue:
        m = queue.popleft()
        for step in maximal_steps(net, m):
            m2 = tc_fire(net, m, step)
            if m2 not in seen:
                if len(seen) >= limit:
                    raise ResourceLimitError(f"more than {limit} tc-reachable markings")
                seen.add(m2)
                queue.append(m2)
    return seen


@dataclass(frozen=True)
class SeqTrace:
    """A firing sequence from the initial marking; ``markings[k]`` is the
    marking after ``k`` steps."""

    net: object = field(repr=False, compare=False)
    steps: tuple
    markings: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        ms = [self.net.initial]
        for t in self.steps:
            ms.append(self.net.fire(ms[-1], t))
        object.__setattr__(self, "markings", tuple(ms))

    def __len__(self):
        return len(self.steps)

    @property
    def final(self):
        return self.markings[-1]


@dataclass(frozen=True)
class TcTrace:
    """A sequence of non-empty true-concurrent steps from the initial marking."""

    net: object = field(repr=False, compare=False)
    steps: tuple
    markings: tuple = field(init=False, repr=False)

    def __post_init__(self):
        steps = tuple(frozenset(s) for s in self.steps)
        if any(not s for s in steps):
            raise InvalidNetError("true-concurrent steps must be non-empty")
        object.__setattr__(self, "steps", steps)
        ms = [self.net.initial]
        for s in steps:
            ms.append(tc_fire(self.net, ms[-1], s))
        object.__setattr__(self, "markings", tuple(ms))

    def __len__(self):
        return len(self.steps)

    @property
    def final(self):
        return self.markings[-1]


def reorder_adjacent(trace, i):
    """Swap the ``i``-th and ``i+1``-th transition (1-based)."""
    if not 1 <= i < len(trace):
        raise ReorderError(f"index {i} out of range for a trace of length {len(trace)}")
    steps = list(trace.steps)
    steps[i - 1], steps[i] = steps[i], steps[i - 1]
    try:
        return SeqTrace(trace.net, steps)
    except (FiringError, UnsafeNetError) as exc:
        raise ReorderError(f"swapping positions {i} and {i + 1} is not fireable: {exc}") from exc


def tc_to_seq(trace):
    """Unroll every step in declaration order."""
    net = trace.net
    return SeqTrace(net, [t for step in trace.steps for t in net.sort(step)])


def is_resolved(net):
    return all(len(net.postset(p)) <= 1 for p in net.places)


def seq_to_tc(trace):
    """Group a sequential trace into maximal true-concurrent steps.

    Transitions enabled at the start of the current group are moved forward by
    valid adjacent swaps, as long as their presets stay disjoint from the
    group; the group then becomes one step.
    """
    net = trace.net
    if not is_resolved(net):
        raise InvalidNetError("seq_to_tc needs a net where every place has at most one outgoing transition")
    current = trace
    steps = []
    start = 0
    while start < len(current):
        marking = current.markings[start]
        group = []
        used = set()
        k = start
        while k < len(current):
            t = current.steps[k]
            pos = start + len(group)
            if net.preset(t) <= marking and not net.preset(t) & used:
                moved = current
                ok = True
                for j in range(k, pos, -1):
                    try:
                        moved = reorder_adjacent(moved, j)
                    except ReorderError:
                        ok = False
                        break
                if ok:
                    current = moved
                    group.append(t)
                    used |= net.preset(t)
            k += 1
        steps.append(frozenset(group))
        start += len(group)
    result = TcTrace(net, steps)
    assert result.final == trace.final
    return result


def reaches_bad(trace, bad):
    """Whether a visited marking (the initial one included) meets ``bad``.

    ``bad`` is a set of places or anything with a ``bad_places`` attribute.
    """
    bad = getattr(bad, "bad_places", bad)
    bad = frozenset(bad)
    return any(m & bad for m in trace.markings)


def is_bounded_trace(trace):
    """All visited markings are distinct, except that the last one may repeat
    exactly one earlier marking."""
    ms = trace.markings
    body = ms[:-1]
    if len(set(body)) != len(body):
        return False
    return body.count(ms[-1]) <= 1


def enumerate_traces(net, semantics="seq", max_steps=20):
    """All maximal traces of at most ``max_steps`` steps, depth first.

    A trace is maximal when nothing is enabled at its end or it has reached
    ``max_steps``.
    """
    if semantics not in ("seq", "tc"):
        raise ValueError(f"unknown semantics {semantics!r}")
    out = []

    def successors(m):
        if semantics == "seq":
            return [(t, net.fire(m, t)) for t in net.enabled(m)]
        return [(s, tc_fire(net, m, s)) for s in maximal_steps(net, m)]

    def walk(m, steps):
        succ = successors(m) if len(steps) < max_steps else []
        if not succ:
            out.append(SeqTrace(net, steps) if semantics == "seq" else TcTrace(net, steps))
            return
        for step, m2 in succ:
            walk(m2, steps + [step])

    walk(net.initial, [])
    return out


def format_trace(trace):
    """One step per line; true-concurrent steps are braced."""
    net = trace.net
    lines = []
    for k, step in enumerate(trace.steps, 1):
        if isinstance(step, frozenset):
            text = "{" + ", ".join(net.sort(step)) + "}"
        else:
            text = step
        lines.append(f"{k:3d}  {text}")
    return "\n".join(lines)


def all_interleavings(trace):
    """Every sequential trace obtained by ordering each step of a TcTrace."""
    net = trace.net
    for orders in itertools.product(*(itertools.permutations(net.sort(s)) for s in trace.steps)):
        yield SeqTrace(net, [t for o in orders for t in o])
