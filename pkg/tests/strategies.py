"""Hypothesis strategies for small random nets and games."""
from hypothesis import assume
from hypothesis import strategies as st

from petrisynth.errors import ResourceLimitError, UnsafeNetError
from petrisynth.game import PetriGame
from petrisynth.net import PetriNet


@st.composite
def nets(draw, max_places=6, max_transitions=6, safe=True):
    n_places = draw(st.integers(2, max_places))
    places = [f"p{i}" for i in range(n_places)]
    subsets = st.lists(st.sampled_from(places), min_size=1, max_size=2, unique=True)
    n_trans = draw(st.integers(0, max_transitions))
    transitions = {f"t{j}": (draw(subsets), draw(subsets)) for j in range(n_trans)}
    initial = draw(st.lists(st.sampled_from(places), min_size=1, max_size=3, unique=True))
    net = PetriNet.from_transitions(places, transitions, initial)
    if safe:
        try:
            net.reachable_markings(limit=256)
        except (UnsafeNetError, ResourceLimitError):
            assume(False)
    return net


@st.composite
def games(draw, **kwargs):
    net = draw(nets(**kwargs))
    env = draw(st.lists(st.sampled_from(net.places), max_size=2, unique=True))
    bad = draw(st.lists(st.sampled_from(net.places), max_size=1, unique=True))
    return PetriGame(net, environment=env, bad=bad)


@st.composite
def resolved_nets(draw, max_places=7, max_transitions=5):
    """Safe nets where every place feeds at most one transition."""
    n_places = draw(st.integers(2, max_places))
    places = [f"p{i}" for i in range(n_places)]
    n_trans = draw(st.integers(1, max_transitions))
    names = [f"t{j}" for j in range(n_trans)]
    consumer = {p: draw(st.sampled_from(names + [None])) for p in places}
    transitions = {}
    for t in names:
        pre = [p for p in places if consumer[p] == t]
        if not pre:
            continue
        post = draw(st.lists(st.sampled_from(places), min_size=1, max_size=2, unique=True))
        transitions[t] = (pre, post)
    initial = draw(st.lists(st.sampled_from(places), min_size=1, max_size=3, unique=True))
    net = PetriNet.from_transitions(places, transitions, initial)
    try:
        net.reachable_markings(limit=256)
    except (UnsafeNetError, ResourceLimitError):
        assume(False)
    return net
