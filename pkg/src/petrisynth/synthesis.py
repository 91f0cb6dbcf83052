"""The bounded-synthesis loop.

For each (bound, length) pair of a schedule the game is unfolded, encoded
and solved.  A satisfying strategy assignment is turned into a strategy net
and checked by direct reachability before it is reported; a failed check is
a :class:`~petrisynth.errors.SoundnessAlarm`.
"""
import logging
import os
import time
from dataclasses import dataclass, field

from .encoding import StrategyVar, encode_sequential, encode_true_concurrent
from .errors import SoundnessAlarm
from .game import restrict, winning_report
from .solving import SAT, UNKNOWN, InternalBackend, extract_strategy, to_qcir
from .unfolding import unfold

log = logging.getLogger(__name__)

#: default number of bounds tried by :func:`default_schedule`
DEFAULT_MAX_BOUND = 3
#: default cap on the simulation length
DEFAULT_MAX_N = 12
#: default wall-clock budget per synthesis run in seconds
DEFAULT_TIMEOUT = 1800

KINDS = {"seq": "sequential", "sequential": "sequential",
         "tc": "true_concurrent", "true_concurrent": "true_concurrent"}


@dataclass
class Iteration:
    bound: int
    n: int
    status: str
    wall_time: float


@dataclass(eq=False)
class SynthesisRun:
    game: object = field(repr=False)
    kind: str
    iterations: list = field(default_factory=list)
    outcome: str = "exhausted"
    strategy: object = field(default=None, repr=False)
    assignment: dict = field(default=None, repr=False)
    unfolding: object = field(default=None, repr=False)
    problem: object = field(default=None, repr=False)

    @property
    def found(self):
        return self.outcome == "strategy"

    @property
    def schedule(self):
        return [(it.bound, it.n) for it in self.iterations]

    @property
    def wall_time(self):
        return sum(it.wall_time for it in self.iterations)


def default_schedule(game, max_bound=DEFAULT_MAX_BOUND, max_n=DEFAULT_MAX_N, first_n=2):
    """Bounds ``1..max_bound``; for each, lengths ``first_n`` up to
    ``min(max_n, |reachable markings of the unfolding| + 1)``.

    The upper length is the point where every run of the unfolding must
    have repeated a marking, so below the cap each bound is decided exactly.
    """
    for b in range(1, max_bound + 1):
        u = unfold(game, b)
        top = min(max_n, len(u.net.reachable_markings()) + 1)
        for n in range(first_n, top + 1):
            yield b, n


def fixed_bound_schedule(bound, max_n=DEFAULT_MAX_N, first_n=1):
    return [(bound, n) for n in range(first_n, max_n + 1)]


def build_strategy_net(u, assignment):
    """Keep a transition iff every system place of its preset allows its
    original transition.

    ``assignment`` maps :class:`StrategyVar` roles to booleans; missing
    roles count as false.
    """
    net = u.net
    removed = set()
    for t in net.transitions:
        for p in net.preset(t) & u.game.system_places:
            if not assignment.get(StrategyVar(p, u.label[t]), False):
                removed.add(t)
                break
    return restrict(u, removed, kind="system")


def validate_strategy(s, game=None):
    """Violations of S1-S3 and reachable bad markings, by direct search."""
    return winning_report(s)


def strategy_pairs(assignment):
    """Sorted ``(place copy, original transition)`` pairs set to true."""
    return sorted((r.place, r.transition) for r, b in assignment.items() if b)


def _encoder(kind, stalling=True):
    kind = KINDS[kind]
    if kind == "sequential":
        return encode_sequential
    return lambda u, n: encode_true_concurrent(u, n, stalling=stalling)


def synthesize(game, kind="true_concurrent", schedule=None, backend=None, timeout=DEFAULT_TIMEOUT,
               max_bound=DEFAULT_MAX_BOUND, max_n=DEFAULT_MAX_N, artifact_dir=None):
    """Run the bounded-synthesis loop; stops at the first validated strategy."""
    if kind not in KINDS:
        raise ValueError(f"unknown encoding {kind!r}")
    backend = backend or InternalBackend()
    if schedule is None:
        schedule = default_schedule(game, max_bound, max_n)
    encode = _encoder(kind)
    run = SynthesisRun(game=game, kind=KINDS[kind])
    start = time.perf_counter()
    unfoldings = {}
    last = None
    for b, n in schedule:
        if b < 1 or n < 1:
            raise ValueError(f"schedule entries need b >= 1 and n >= 1, got {(b, n)}")
        if last is not None and (b < last[0] or (b == last[0] and n < last[1])):
            raise ValueError(f"schedule must be non-decreasing, {(b, n)} follows {last}")
        last = (b, n)
        if time.perf_counter() - start > timeout:
            run.outcome = "timeout"
            return run
        t0 = time.perf_counter()
        if b not in unfoldings:
            unfoldings.clear()
            unfoldings[b] = unfold(game, b)
        u = unfoldings[b]
        q = encode(u, n)
        result = backend(q)
        status = result.status
        if status == SAT:
            witness = extract_strategy(q, backend, result)
            assignment = {q.registry.role(v): val for v, val in witness.items()}
            s = build_strategy_net(u, assignment)
            report = validate_strategy(s, game)
            run.iterations.append(Iteration(b, n, status, time.perf_counter() - t0))
            if report:
                artifacts = {"qcir": to_qcir(q), "strategy": strategy_pairs(assignment),
                             "bound": b, "n": n, "encoding": run.kind}
                _dump(artifact_dir, artifacts)
                raise SoundnessAlarm(f"{run.kind} encoding reported SAT at b={b}, n={n} but the strategy "
                                     f"fails validation: {report[0]}", report, artifacts)
            run.outcome = "strategy"
            run.strategy = s
            run.assignment = assignment
            run.unfolding = u
            run.problem = q
            log.info("b=%d n=%d SAT", b, n)
            return run
        run.iterations.append(Iteration(b, n, status, time.perf_counter() - t0))
        log.info("b=%d n=%d %s", b, n, status)
        if status == UNKNOWN:
            log.warning("solver returned no answer at b=%d n=%d: %s", b, n, result.diagnostics)
    run.outcome = "exhausted"
    return run


def _dump(directory, artifacts):
    if not directory:
        return
    os.makedirs(directory, exist_ok=True)
    tag = f"{artifacts['encoding']}_b{artifacts['bound']}_n{artifacts['n']}"
    with open(os.path.join(directory, tag + ".qcir"), "w") as fh:
        fh.write(artifacts["qcir"])
    with open(os.path.join(directory, tag + ".pgstrat"), "w") as fh:
        fh.write(f".bound {artifacts['bound']}\n")
        for p, t in artifacts["strategy"]:
            fh.write(f"{p} {t}\n")
