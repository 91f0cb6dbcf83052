"""Petri games, system and environment strategies, and their checkers.

A strategy is a subprocess of its parent: some transitions are removed and
everything that can no longer be reached from the initial marking is pruned.
The checkers return lists of :class:`Violation` records; an empty list
means the requirement holds.  All reachability is sequential (interleaving).
"""
import itertools
from dataclasses import dataclass, field

from .errors import InvalidNetError, ResourceLimitError
from .net import PetriNet

#: default guard on markings explored per check
MAX_CHECK_MARKINGS = 2 ** 18
#: default guard on candidate environment strategies
MAX_ENV_CANDIDATES = 2 ** 16


class PetriGame:
    """A Petri net whose places are split into system and environment places.

    Every place not listed in ``environment`` is a system place.  A game can
    stand in for its own unfolding with bound 1: ``game``, ``label`` and
    ``unfolding`` make it usable wherever a :class:`BoundedUnfolding` is.
    """

    def __init__(self, net, environment=(), bad=()):
        self.net = net
        self.environment_places = frozenset(environment)
        self.bad_places = frozenset(bad)
        places = frozenset(net.places)
        if not self.environment_places <= places:
            raise InvalidNetError(f"unknown environment places {sorted(self.environment_places - places)}")
        if not self.bad_places <= places:
            raise InvalidNetError(f"unknown bad places {sorted(self.bad_places - places)}")
        self.system_places = places - self.environment_places

    @property
    def game(self):
        return self

    @property
    def unfolding(self):
        return self

    @property
    def label(self):
        return _Identity()

    def is_system(self, place):
        return place in self.system_places

    def is_environment(self, place):
        return place in self.environment_places

    def restricted_to(self, net):
        """The same classification over a subnet."""
        places = set(net.places)
        return PetriGame(net, self.environment_places & places, self.bad_places & places)

    def __eq__(self, other):
        if not isinstance(other, PetriGame):
            return NotImplemented
        return (self.net == other.net and self.environment_places == other.environment_places
                and self.bad_places == other.bad_places)

    def __hash__(self):
        return hash((self.net, self.environment_places, self.bad_places))

    def __repr__(self):
        return (f"<PetriGame |P|={len(self.net.places)} |T|={len(self.net.transitions)} "
                f"env={len(self.environment_places)} bad={len(self.bad_places)}>")

    def to_dot(self, name="game"):
        return self.net.to_dot(name=name, bad=self.bad_places, environment=self.environment_places)


class _Identity(dict):
    def __missing__(self, key):
        return key


@dataclass(frozen=True)
class Violation:
    """One witness against a strategy requirement."""

    rule: str
    marking: frozenset = None
    nodes: tuple = ()
    message: str = ""

    def __str__(self):
        where = "" if self.marking is None else " at {" + ", ".join(sorted(self.marking)) + "}"
        return f"[{self.rule}]{where}: {self.message}"


@dataclass(frozen=True, eq=False)
class StrategyNet:
    """A subprocess of an unfolding (system strategy) or of a system strategy
    (environment strategy)."""

    base: object
    kept: frozenset
    net: PetriNet
    game: PetriGame
    kind: str
    label: dict = field(repr=False)

    @property
    def unfolding(self):
        return self.base.unfolding

    @property
    def removed(self):
        return frozenset(self.base.net.transitions) - self.kept

    def to_dot(self, name="strategy"):
        labels = {x: self.label[x] for x in self.net.places + self.net.transitions if self.label[x] != x}
        return self.net.to_dot(name=name, bad=self.game.bad_places,
                               environment=self.game.environment_places, labels=labels)


def restrict(base, removed, kind=None):
    """Remove ``removed`` from ``base`` and prune what becomes unreachable.

    Reachability here is structural: a transition survives when every place
    of its preset survives; a place survives when it is initially marked or in
    the postset of a surviving transition.
    """
    net = base.net
    removed = frozenset(removed)
    unknown = removed - set(net.transitions)
    if unknown:
        raise InvalidNetError(f"cannot remove unknown transitions {sorted(unknown)}")
    if kind is None:
        kind = "environment" if isinstance(base, StrategyNet) else "system"

    places = set(net.initial)
    kept = set()
    changed = True
    while changed:
        changed = False
        for t in net.transitions:
            if t in kept or t in removed:
                continue
            if net.preset(t) <= places:
                kept.add(t)
                places |= net.postset(t)
                changed = True

    sub_places = [p for p in net.places if p in places]
    sub_transitions = [t for t in net.transitions if t in kept]
    flow = [(x, y) for (x, y) in net.flow if (x in places or x in kept) and (y in places or y in kept)]
    derived = PetriNet(sub_places, sub_transitions, flow, net.initial)
    label = {x: base.label[x] for x in sub_places + sub_transitions}
    return StrategyNet(base=base, kept=frozenset(kept), net=derived,
                       game=base.game.restricted_to(derived), kind=kind, label=label)


def _reachable(net, limit):
    return sorted(net.reachable_markings(limit=limit), key=lambda m: (len(m), sorted(map(net.order, m))))


def check_s1_determinism(s, limit=MAX_CHECK_MARKINGS):
    """Each system place has at most one enabled outgoing transition at every
    reachable marking."""
    out = []
    net = s.net
    for m in _reachable(net, limit):
        enabled = net.enabled(m)
        for p in net.sort(m & s.game.system_places):
            competing = [t for t in enabled if p in net.preset(t)]
            if len(competing) > 1:
                out.append(Violation("S1", m, (p, *competing),
                                     f"system place {p} has {len(competing)} enabled transitions {competing}"))
    return out


def check_s2_system_refusal(s):
    """Every removed transition whose preset survived was refused by a system
    place that removed all copies of it."""
    unf = s.unfolding
    full = unf.net
    kept_places = set(s.net.places)
    present = set(s.net.transitions)
    out = []
    for t in full.transitions:
        if t in present or not full.preset(t) <= kept_places:
            continue
        justified = False
        for p in full.preset(t):
            if p not in unf.game.system_places:
                continue
            copies = [t2 for t2 in full.postset(p) if unf.label[t2] == unf.label[t]]
            if all(t2 not in present for t2 in copies):
                justified = True
                break
        if not justified:
            out.append(Violation("S2", None, (t,), f"{t} was removed without a refusing system place"))
    return out


def _progress(s, parent_net, rule, limit):
    out = []
    net = s.net
    for m in _reachable(net, limit):
        parent_enabled = [t for t in parent_net.transitions if parent_net.preset(t) <= m]
        if parent_enabled and not net.enabled(m):
            out.append(Violation(rule, m, tuple(parent_enabled),
                                 f"nothing enabled although {parent_enabled} could fire"))
    return out


def check_s3_deadlock_avoidance(s, limit=MAX_CHECK_MARKINGS):
    """Whenever the unfolding could fire something, the strategy can too."""
    return _progress(s, s.unfolding.net, "S3", limit)


def check_e1_explicit_choice(e):
    out = []
    for p in e.net.sort(e.game.environment_places):
        outs = e.net.sort(e.net.postset(p))
        if len(outs) > 1:
            out.append(Violation("E1", None, (p, *outs), f"environment place {p} keeps {outs}"))
    return out


def check_e2_environment_refusal(e):
    parent = e.base.net
    places = set(e.net.places)
    present = set(e.net.transitions)
    out = []
    for t in parent.transitions:
        if t in present or not parent.preset(t) <= places:
            continue
        if not parent.preset(t) & e.game.environment_places:
            out.append(Violation("E2", None, (t,), f"{t} removed but its preset has no environment place"))
    return out


def check_e3_progress(e, limit=MAX_CHECK_MARKINGS):
    return _progress(e, e.base.net, "E3", limit)


def bad_markings(s, limit=MAX_CHECK_MARKINGS):
    """Reachable markings of ``s`` that contain a bad place."""
    return [Violation("bad", m, tuple(s.net.sort(m & s.game.bad_places)), "bad place reached")
            for m in _reachable(s.net, limit) if m & s.game.bad_places]


def winning_report(s, limit=MAX_CHECK_MARKINGS):
    """All violations of S1-S3 plus reachable bad markings."""
    return (check_s1_determinism(s, limit) + check_s2_system_refusal(s)
            + check_s3_deadlock_avoidance(s, limit) + bad_markings(s, limit))


def is_winning_system(s, limit=MAX_CHECK_MARKINGS):
    return not winning_report(s, limit)


def enumerate_environment_strategies(s, limit=MAX_ENV_CANDIDATES, check_limit=MAX_CHECK_MARKINGS):
    """Yield every environment strategy of the system strategy ``s``.

    Each environment place keeps one or none of its outgoing transitions;
    candidates failing E2 or E3 are dropped and duplicates (equal kept sets
    after pruning) are yielded once.
    """
    net = s.net
    env = net.sort(p for p in s.game.environment_places if net.postset(p))
    options = [[None] + net.sort(net.postset(p)) for p in env]
    total = 1
    for o in options:
        total *= len(o)
    if total > limit:
        raise ResourceLimitError(f"{total} environment choice combinations exceed {limit}")
    seen = set()
    for combo in itertools.product(*options):
        removed = set()
        for p, choice in zip(env, combo):
            removed.update(t for t in net.postset(p) if t != choice)
        e = restrict(s, removed, kind="environment")
        if e.kept in seen:
            continue
        seen.add(e.kept)
        if check_e1_explicit_choice(e) or check_e2_environment_refusal(e):
            continue
        if check_e3_progress(e, check_limit):
            continue
        yield e


def has_unique_run(e):
    """Every place has at most one outgoing transition."""
    return all(len(e.net.postset(p)) <= 1 for p in e.net.places)
