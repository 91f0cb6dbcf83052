"""Scalable benchmark games and the suite runner.

Families (``m`` is the size parameter):

PL  production line.  The environment picks a profile ``k`` in ``1..m``; the
    profile transition hands every robot its feature and leaves a check
    token.  Under profile ``k`` robots ``1..k`` must repair and the others
    must ignore; every wrong decision can meet the check token and move it
    to the bad place.  ``PL(2)`` is the two-robot running example, node
    names included.  Robots need one memory copy per profile, so the bench
    bound is ``m``.
DW  document workflow.  The environment hands a document to one of ``m``
    workers and concurrently files a ledger entry.  The document travels
    around the ring; each worker endorses or rejects it once and passes it
    on.  The document token belongs to the worker holding it, so only the
    first worker and the filing are up to the environment.  A judge token
    reaches the bad place when two workers disagree.
AS  alarm system.  A burglar intrudes one of ``m`` locations.  The local
    alarm there detects it and sends a message to every other alarm; any
    alarm may also raise a claim on its own.  Claiming a location other
    than the intruded one is bad.
CA  collision avoidance.  The environment activates any subset of ``m``
    robots.  Robot ``i`` picks lane ``a`` or ``b`` of length ``i + 1`` and
    drives it in a loop forever; lane ``a`` of robot ``i`` crosses lane
    ``b`` of robot ``i + 1`` (cyclically), and two robots on crossing cells
    collide.  Driving along a lane is uncontrolled, so lane cells are
    environment places and a collision cannot be refused.
DR  disjoint routing.  The ingress switch releases ``m`` packets; each
    packet picks one of ``m`` two-hop paths to the egress switch.  Two
    packets on the same path collide.  Hops are environment places.

All families except PL are solvable without memory, so their bench bound
is 1.
"""
import csv
import io
import random
import time
from dataclasses import dataclass, field

from .errors import InvalidNetError, ResourceLimitError, UnsafeNetError
from .game import PetriGame
from .net import PetriNet
from .synthesis import fixed_bound_schedule, synthesize

FAMILIES = ("AS", "CA", "DR", "PL", "DW")
CSV_HEADER = ["family", "param", "encoding", "iterations", "runtime_s", "outcome"]
KIND_LABEL = {"sequential": "seq", "true_concurrent": "tc"}


@dataclass(eq=False)
class BenchmarkInstance:
    family: str
    param: int
    game: PetriGame = field(repr=False)
    bound: int = 1
    expected_realizable: bool = True


class _GameBuilder:
    def __init__(self):
        self.places = {}
        self.transitions = {}
        self.initial = []

    def place(self, name, env=False, bad=False, init=False):
        if name not in self.places:
            self.places[name] = (env, bad)
            if init:
                self.initial.append(name)
        return name

    def transition(self, name, pre, post):
        if name in self.transitions:
            raise InvalidNetError(f"duplicate transition {name}")
        self.transitions[name] = (list(pre), list(post))

    def build(self):
        net = PetriNet.from_transitions(list(self.places), self.transitions, self.initial)
        env = [p for p, (e, _) in self.places.items() if e]
        bad = [p for p, (_, b) in self.places.items() if b]
        return PetriGame(net, environment=env, bad=bad)


def _profile_name(k):
    return "1_robot" if k == 1 else f"{k}_robots"


# the running example's names for its four mistake transitions
_PL2_NAMES = {("ignore", 1, 1): "wrong_ignore1", ("repair", 2, 1): "wrong_repair",
              ("ignore", 2, 2): "wrong_ignore2", ("ignore", 1, 2): "wrong_ignore3"}


def production_line(m):
    g = _GameBuilder()
    g.place("env", env=True, init=True)
    for i in range(1, m + 1):
        g.place(f"env{i}", env=True)
        g.place(f"robot{i}")
    for i in range(1, m + 1):
        g.place(f"ignored{i}")
        g.place(f"repaired{i}")
    for k in range(1, m + 1):
        g.place(_profile_name(k) + "_check", env=True)
    g.place("bot", bad=True)
    hand_out = [p for i in range(1, m + 1) for p in (f"env{i}", f"robot{i}")]
    for k in range(1, m + 1):
        g.transition(_profile_name(k), ["env"], [_profile_name(k) + "_check"] + hand_out)
    for i in range(1, m + 1):
        g.transition(f"ignore{i}", [f"robot{i}"], [f"ignored{i}"])
        g.transition(f"repair{i}", [f"env{i}", f"robot{i}"], [f"repaired{i}"])
    mistakes = []
    for k in range(1, m + 1):
        for i in range(1, m + 1):
            kind = "ignore" if i <= k else "repair"
            done = f"ignored{i}" if kind == "ignore" else f"repaired{i}"
            name = _PL2_NAMES[(kind, i, k)] if m == 2 else f"wrong_{kind}{i}_{k}"
            mistakes.append((name, [done, _profile_name(k) + "_check"]))
    if m == 2:
        order = ["wrong_ignore1", "wrong_repair", "wrong_ignore2", "wrong_ignore3"]
        mistakes.sort(key=lambda x: order.index(x[0]))
    for name, pre in mistakes:
        g.transition(name, pre, ["bot"])
    return g.build()


def document_workflow(m):
    g = _GameBuilder()
    g.place("start", env=True, init=True)
    g.place("judge", env=True, init=True)
    g.place("ledger", env=True)
    g.place("filed", env=True)
    for i in range(1, m + 1):
        g.place(f"idle{i}", init=True)
        g.place(f"doc{i}")
        g.place(f"yes{i}")
        g.place(f"no{i}")
    g.place("bad", bad=True)
    for i in range(1, m + 1):
        g.transition(f"choose{i}", ["start"], [f"doc{i}", "ledger"])
    g.transition("file", ["ledger"], ["filed"])
    for i in range(1, m + 1):
        nxt = f"doc{i % m + 1}"
        g.transition(f"endorse{i}", [f"idle{i}", f"doc{i}"], [f"yes{i}", nxt])
        g.transition(f"reject{i}", [f"idle{i}", f"doc{i}"], [f"no{i}", nxt])
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i != j:
                g.transition(f"disagree{i}_{j}", [f"yes{i}", f"no{j}", "judge"], ["bad"])
    return g.build()


def alarm_system(m):
    g = _GameBuilder()
    g.place("start", env=True, init=True)
    for i in range(1, m + 1):
        g.place(f"alarm{i}", init=True)
        g.place(f"burglar{i}", env=True)
        g.place(f"where{i}", env=True)
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i != j:
                g.place(f"msg{i}_{j}")
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            g.place(f"said{j}_{k}")
    g.place("bad", bad=True)
    for i in range(1, m + 1):
        g.transition(f"intrude{i}", ["start"], [f"burglar{i}", f"where{i}"])
    for i in range(1, m + 1):
        g.transition(f"detect{i}", [f"alarm{i}", f"burglar{i}"],
                     [f"said{i}_{i}"] + [f"msg{i}_{j}" for j in range(1, m + 1) if j != i])
    for j in range(1, m + 1):
        for i in range(1, m + 1):
            if i != j:
                g.transition(f"learn{j}_{i}", [f"alarm{j}", f"msg{i}_{j}"], [f"said{j}_{i}"])
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            g.transition(f"guess{j}_{k}", [f"alarm{j}"], [f"said{j}_{k}"])
    for j in range(1, m + 1):
        for k in range(1, m + 1):
            for lo in range(1, m + 1):
                if k != lo:
                    g.transition(f"false{j}_{k}_{lo}", [f"said{j}_{k}", f"where{lo}"], ["bad"])
    return g.build()


def collision_avoidance(m):
    g = _GameBuilder()
    g.place("judge", env=True, init=True)
    for i in range(1, m + 1):
        g.place(f"pick{i}", env=True, init=True)
        g.place(f"parked{i}", env=True)
        g.place(f"start{i}")
        for lane in "ab":
            for k in range(1, i + 2):
                g.place(f"{lane}{i}_{k}", env=True)
    g.place("bad", bad=True)
    for i in range(1, m + 1):
        g.transition(f"activate{i}", [f"pick{i}"], [f"start{i}"])
        g.transition(f"skip{i}", [f"pick{i}"], [f"parked{i}"])
        for lane in "ab":
            g.transition(f"go{lane}{i}", [f"start{i}"], [f"{lane}{i}_1"])
            for k in range(1, i + 1):
                g.transition(f"drive{lane}{i}_{k}", [f"{lane}{i}_{k}"], [f"{lane}{i}_{k + 1}"])
            g.transition(f"back{lane}{i}", [f"{lane}{i}_{i + 1}"], [f"start{i}"])
    if m >= 2:
        for i in range(1, m + 1):
            j = i % m + 1
            for k in range(1, min(i, j) + 2):
                g.transition(f"crash{i}_{j}_{k}", [f"a{i}_{k}", f"b{j}_{k}", "judge"], ["bad"])
    return g.build()


def disjoint_routing(m):
    g = _GameBuilder()
    g.place("ingress", env=True, init=True)
    g.place("judge", env=True, init=True)
    for i in range(1, m + 1):
        g.place(f"packet{i}")
        for j in range(1, m + 1):
            g.place(f"hop{i}_{j}_1", env=True)
            g.place(f"hop{i}_{j}_2", env=True)
        g.place(f"egress{i}")
    g.place("bad", bad=True)
    g.transition("release", ["ingress"], [f"packet{i}" for i in range(1, m + 1)])
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            g.transition(f"route{i}_{j}", [f"packet{i}"], [f"hop{i}_{j}_1"])
            g.transition(f"forward{i}_{j}", [f"hop{i}_{j}_1"], [f"hop{i}_{j}_2"])
            g.transition(f"deliver{i}_{j}", [f"hop{i}_{j}_2"], [f"egress{i}"])
    for j in range(1, m + 1):
        for i in range(1, m + 1):
            for k in range(i + 1, m + 1):
                for x in (1, 2):
                    for y in (1, 2):
                        g.transition(f"clash{j}_{i}_{k}_{x}{y}",
                                     [f"hop{i}_{j}_{x}", f"hop{k}_{j}_{y}", "judge"], ["bad"])
    return g.build()


GENERATORS = {"PL": production_line, "DW": document_workflow, "AS": alarm_system,
              "CA": collision_avoidance, "DR": disjoint_routing}


def generate(family, m):
    """Instance ``m`` of a benchmark family."""
    family = family.upper()
    if family not in GENERATORS:
        raise ValueError(f"unknown benchmark family {family!r}; choose from {', '.join(FAMILIES)}")
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"parameter must be a positive integer, got {m!r}")
    bound = m if family == "PL" else 1
    return BenchmarkInstance(family, m, GENERATORS[family](m), bound=bound)


def run_suite(families, params, kinds=("sequential", "true_concurrent"), backend=None,
              max_n=24, timeout=1800, jobs=1):
    """Synthesize every (family, param, kind) with the fixed bench schedule.

    Each instance uses its documented bound and lengths ``1..max_n``.
    Returns ``(rows, csv_text)``; rows follow the argument order.
    """
    tasks = [(f, m, k) for f in families for m in params for k in kinds]
    if jobs > 1 and tasks:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_one, [(f, m, k, backend, max_n, timeout) for f, m, k in tasks]))
    else:
        rows = [_run_one((f, m, k, backend, max_n, timeout)) for f, m, k in tasks]
    return rows, rows_to_csv(rows)


def _run_one(args):
    family, m, kind, backend, max_n, timeout = args
    inst = generate(family, m)
    start = time.perf_counter()
    run = synthesize(inst.game, kind, schedule=fixed_bound_schedule(inst.bound, max_n),
                     backend=backend, timeout=timeout)
    elapsed = time.perf_counter() - start
    kind_label = KIND_LABEL[run.kind]
    iterations = len(run.iterations) if run.outcome == "strategy" else ""
    return {"family": family.upper(), "param": m, "encoding": kind_label, "iterations": iterations,
            "runtime_s": f"{elapsed:.3f}", "outcome": run.outcome}


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def random_game(rng, max_places=6, max_transitions=6, max_env=2, acyclic=False, max_markings=64):
    """A random safe game; retries until the sampled net is 1-bounded.

    With ``acyclic`` the places are ordered and every transition only moves
    tokens forward, so the game terminates.
    """
    if isinstance(rng, int):
        rng = random.Random(rng)
    while True:
        np_ = rng.randint(2, max_places)
        nt = rng.randint(1, max_transitions)
        places = [f"p{i}" for i in range(np_)]
        transitions = {}
        for j in range(nt):
            if acyclic:
                cut = rng.randint(1, np_ - 1)
                pre = rng.sample(places[:cut], min(cut, rng.choice((1, 1, 2))))
                post = rng.sample(places[cut:], min(np_ - cut, rng.choice((1, 1, 2))))
            else:
                pre = rng.sample(places, rng.choice((1, 1, 2)))
                post = rng.sample(places, rng.choice((1, 1, 2)))
            transitions[f"t{j}"] = (pre, post)
        initial = rng.sample(places, rng.randint(1, min(3, np_)))
        env = rng.sample(places, rng.randint(0, min(max_env, np_)))
        bad = rng.sample(places, rng.choice((0, 1, 1)))
        try:
            net = PetriNet.from_transitions(places, transitions, initial)
            if len(net.reachable_markings(limit=max_markings)) > max_markings:
                continue
        except (UnsafeNetError, ResourceLimitError, InvalidNetError):
            continue
        return PetriGame(net, environment=env, bad=bad)
