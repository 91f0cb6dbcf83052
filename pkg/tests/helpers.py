"""Random strategies over random games for property tests."""
import random

from petrisynth.bench import random_game
from petrisynth.encoding import StrategyVar
from petrisynth.synthesis import build_strategy_net
from petrisynth.unfolding import unfold


def strategy_roles(u):
    net = u.net
    roles = []
    for p in net.places:
        if p in u.game.system_places:
            for o in dict.fromkeys(u.label[t] for t in net.sort(net.postset(p))):
                roles.append(StrategyVar(p, o))
    return roles


def random_strategy(u, rng):
    return build_strategy_net(u, {r: rng.random() < 0.6 for r in strategy_roles(u)})


def unfolded_acyclic_games(seed, count, bound=3):
    """Acyclic random games unfolded far enough that nothing is folded."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        g = random_game(rng, acyclic=True)
        u = unfold(g, bound)
        if not u.folded:
            out.append((g, u, rng))
    return out


def random_qbf(rng, n_exists=3, n_forall=3, size=8):
    """A random exists-forall problem over a fresh circuit."""
    from petrisynth.circuit import Circuit
    from petrisynth.encoding import QbfProblem
    c = Circuit()
    ex = [c.new_var() for _ in range(n_exists)]
    fa = [c.new_var() for _ in range(n_forall)]
    pool = [v * rng.choice((1, -1)) for v in ex + fa]
    for _ in range(size):
        kids = rng.sample(pool, min(len(pool), rng.randint(2, 3)))
        g = c.and_(kids) if rng.random() < 0.5 else c.or_(kids)
        pool.append(c.not_(g) if rng.random() < 0.3 and g not in (True, False) else g)
    return QbfProblem(c, [("exists", ex), ("forall", fa)], pool[-1])


def random_resolved_net(rng, max_places=7, max_transitions=5):
    """A safe net in which every place feeds at most one transition."""
    from petrisynth.errors import ResourceLimitError, UnsafeNetError
    from petrisynth.net import PetriNet
    while True:
        places = [f"p{i}" for i in range(rng.randint(2, max_places))]
        names = [f"t{j}" for j in range(rng.randint(1, max_transitions))]
        consumer = {p: rng.choice(names + [None]) for p in places}
        transitions = {}
        for t in names:
            pre = [p for p in places if consumer[p] == t]
            if pre:
                transitions[t] = (pre, rng.sample(places, rng.randint(1, 2)))
        initial = rng.sample(places, rng.randint(1, min(3, len(places))))
        net = PetriNet.from_transitions(places, transitions, initial)
        try:
            net.reachable_markings(limit=256)
        except (UnsafeNetError, ResourceLimitError):
            continue
        return net


def random_run(net, rng, max_len=8):
    from petrisynth.semantics import SeqTrace
    steps, m = [], net.initial
    for _ in range(rng.randint(0, max_len)):
        en = net.enabled(m)
        if not en:
            break
        t = rng.choice(en)
        steps.append(t)
        m = net.fire(m, t)
    return SeqTrace(net, steps)
