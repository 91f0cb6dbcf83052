"""Bounded unfoldings of Petri games.

Every place of the game gets at most ``bound`` copies, one per causal past,
and every transition gets one copy per combination of preset copies that can
be marked together.  The construction is driven by the reachable markings of
the net being built, so each firing sequence of the game is matched by one of
the unfolding and vice versa.

When a transition copy needs a fresh copy of place ``p`` but ``p`` already has
``bound`` copies, the arc is folded back onto the first copy of ``p``.  This
is where cycles in a bounded unfolding come from.  Copies are named by
priming, ``p``, ``p'``, ``p''`` ..., in creation order.
"""
from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import InvalidNetError, ResourceLimitError
from .game import PetriGame, Violation
from .net import PetriNet

#: default guard on the number of nodes of an unfolding
MAX_NODES = 20000
#: default guard on the markings explored while unfolding
MAX_UNFOLD_MARKINGS = 2 ** 18


@dataclass(frozen=True, eq=False)
class BoundedUnfolding:
    """An unfolded game together with its homomorphism to the original."""

    game: PetriGame
    original: PetriGame
    label: dict = field(repr=False)
    bound: int
    copy_index: dict = field(repr=False)
    folded: bool = False

    @property
    def net(self):
        return self.game.net

    @property
    def unfolding(self):
        return self

    def copies(self, node):
        """Copies of an original node in creation order."""
        return [x for x in self.net.places + self.net.transitions if self.label[x] == node]

    def to_dot(self, name="unfolding"):
        labels = {x: self.label[x] for x in self.net.places + self.net.transitions if self.label[x] != x}
        return self.net.to_dot(name=name, bad=self.game.bad_places,
                               environment=self.game.environment_places, labels=labels)


def unfold(game, bound, max_nodes=MAX_NODES, max_markings=MAX_UNFOLD_MARKINGS):
    """Construct the ``bound``-bounded unfolding of ``game``."""
    if not isinstance(bound, int) or bound < 1:
        raise ValueError(f"bound must be a positive integer, got {bound!r}")
    net = game.net
    used = set(net.places) | set(net.transitions)
    taken = set()

    def fresh_name(base, ordinal):
        name = base + "'" * ordinal
        while name in taken or (name != base and name in used):
            name += "'"
        taken.add(name)
        return name

    place_copies = {p: [] for p in net.places}
    label = {}
    copy_index = {}
    folded = False

    def new_place(p):
        name = fresh_name(p, len(place_copies[p]))
        copy_index[name] = (p, len(place_copies[p]))
        place_copies[p].append(name)
        label[name] = p
        return name

    initial = frozenset(new_place(p) for p in net.sort(net.initial))

    instances = {}       # (original transition, preset copies) -> copy
    instance_count = Counter()
    pre = {}
    post = {}

    def node_count():
        return len(label)

    seen = {initial}
    queue = deque([initial])
    while queue:
        m = queue.popleft()
        holder = {label[c]: c for c in m}
        for t in net.transitions:
            if not net.preset(t) <= holder.keys():
                continue
            key = (t, tuple(holder[p] for p in net.sort(net.preset(t))))
            copy = instances.get(key)
            if copy is None:
                copy = fresh_name(t, instance_count[t])
                instance_count[t] += 1
                instances[key] = copy
                label[copy] = t
                pre[copy] = frozenset(key[1])
                outs = []
                for p in net.sort(net.postset(t)):
                    if len(place_copies[p]) < bound:
                        outs.append(new_place(p))
                    else:
                        outs.append(place_copies[p][0])
                        folded = True
                post[copy] = frozenset(outs)
                if node_count() > max_nodes:
                    raise ResourceLimitError(f"unfolding exceeds {max_nodes} nodes")
            rest = m - pre[copy]
            if rest & post[copy]:
                raise InvalidNetError(f"game is not 1-bounded: firing {t} overflows")
            m2 = rest | post[copy]
            if m2 not in seen:
                if len(seen) >= max_markings:
                    raise ResourceLimitError(f"unfolding explores more than {max_markings} markings")
                seen.add(m2)
                queue.append(m2)

    places = [c for p in net.places for c in place_copies[p]]
    created = {c: i for i, c in enumerate(pre)}
    transitions = sorted(pre, key=lambda c: (net.order(label[c]), created[c]))
    flow = [(p, t) for t in transitions for p in pre[t]] + [(t, p) for t in transitions for p in post[t]]
    unet = PetriNet(places, transitions, flow, initial)
    ugame = PetriGame(unet,
                      environment=[c for c in places if label[c] in game.environment_places],
                      bad=[c for c in places if label[c] in game.bad_places])
    return BoundedUnfolding(game=ugame, original=game, label=label, bound=bound,
                            copy_index=copy_index, folded=folded)


def verify_homomorphism(u):
    """Check the unfolding invariants; returns violations (empty when sound)."""
    out = []
    net, orig, label = u.net, u.original.net, u.label
    og = u.original
    for x in net.places + net.transitions:
        if x not in label or label[x] not in orig:
            out.append(Violation("lambda", None, (x,), f"{x} has no original node"))
            continue
        if net.is_place(x) != orig.is_place(label[x]):
            out.append(Violation("lambda", None, (x,), f"{x} and {label[x]} differ in kind"))
    if out:
        return out
    for p in net.places:
        o = label[p]
        if (p in u.game.environment_places) != (o in og.environment_places):
            out.append(Violation("lambda", None, (p,), f"{p} changes environment/system class"))
        if (p in u.game.bad_places) != (o in og.bad_places):
            out.append(Violation("lambda", None, (p,), f"{p} changes bad-place status"))
    for t in net.transitions:
        o = label[t]
        for side, mine, theirs in (("preset", net.preset(t), orig.preset(o)),
                                   ("postset", net.postset(t), orig.postset(o))):
            images = Counter(label[p] for p in mine)
            if images != Counter(theirs):
                out.append(Violation("lambda", None, (t,),
                                     f"{side} of {t} maps to {sorted(images.elements())}, expected {sorted(theirs)}"))
    per_place = Counter(label[p] for p in net.places)
    for o, k in per_place.items():
        if k > u.bound:
            out.append(Violation("bound", None, (o,), f"{o} has {k} copies, bound is {u.bound}"))
    init_images = Counter(label[p] for p in net.initial)
    if init_images != Counter(orig.initial):
        out.append(Violation("initial", net.initial, (), "initial marking does not map bijectively"))
    return out
