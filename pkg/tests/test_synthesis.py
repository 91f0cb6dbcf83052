import itertools
import random

import pytest

from helpers import strategy_roles
from petrisynth.bench import random_game
from petrisynth.encoding import StrategyVar
from petrisynth.errors import SoundnessAlarm
from petrisynth.game import PetriGame, winning_report
from petrisynth.net import PetriNet
from petrisynth.solving import SAT, UNKNOWN, SolveResult
from petrisynth.synthesis import (build_strategy_net, default_schedule, fixed_bound_schedule, strategy_pairs,
                                  synthesize)
from petrisynth.unfolding import unfold


def winning_strategy_exists(game, bound):
    """Oracle: try every strategy assignment on the bound-b unfolding."""
    u = unfold(game, bound)
    roles = strategy_roles(u)
    for bits in itertools.product([False, True], repeat=len(roles)):
        if not winning_report(build_strategy_net(u, dict(zip(roles, bits)))):
            return True
    return False


def test_running_example_strategy(pl2):
    for kind in ("seq", "tc"):
        run = synthesize(pl2, kind)
        assert run.found and run.unfolding.bound == 2
        assert winning_report(run.strategy) == []
        pairs = set(strategy_pairs(run.assignment))
        # one robot alone repairs its machine; with two robots exactly robot2 repairs
        assert {("robot1", "repair1"), ("robot1'", "repair1"), ("robot2'", "repair2")} <= pairs
        assert ("robot2", "repair2") not in pairs and ("robot2", "ignore2") in pairs
        assert ("robot1", "ignore1") not in pairs and ("robot2'", "ignore2") not in pairs
        assert all(it.status != SAT for it in run.iterations[:-1])
        assert run.iterations[-1].status == SAT


def test_running_example_needs_two_copies(pl2):
    run = synthesize(pl2, "tc", max_bound=1)
    assert run.outcome == "exhausted" and not run.found
    assert {it.bound for it in run.iterations} == {1}


def test_nondeterminism_game_is_exhausted(nondet):
    for kind in ("seq", "tc"):
        run = synthesize(nondet, kind)
        assert run.outcome == "exhausted"
        assert run.strategy is None


def test_bad_initial_marking():
    net = PetriNet(["b"], [], [], ["b"])
    assert synthesize(PetriGame(net, bad=["b"]), "seq").outcome == "exhausted"
    ok = synthesize(PetriGame(net), "seq")
    assert ok.found and ok.schedule == [(1, 2)]


def test_schedules(pl2):
    sched = list(default_schedule(pl2, max_bound=2, max_n=5))
    assert sched == [(b, n) for b in (1, 2) for n in range(2, 6)]
    assert fixed_bound_schedule(2, 3) == [(2, 1), (2, 2), (2, 3)]
    tiny = PetriGame(PetriNet(["a"], [], [], ["a"]))
    assert list(default_schedule(tiny, max_bound=1)) == [(1, 2)]


def test_schedule_validation(pl2):
    with pytest.raises(ValueError):
        synthesize(pl2, "seq", schedule=[(1, 3), (1, 2)])
    with pytest.raises(ValueError):
        synthesize(pl2, "seq", schedule=[(0, 2)])
    with pytest.raises(ValueError):
        synthesize(pl2, "bogus")


def test_timeout(pl2):
    run = synthesize(pl2, "tc", timeout=-1)
    assert run.outcome == "timeout" and run.iterations == []


def test_build_strategy_net_extremes(pl2_unfolding):
    u = pl2_unfolding
    roles = strategy_roles(u)
    full = build_strategy_net(u, {r: True for r in roles})
    assert full.net.transitions == u.net.transitions
    none = build_strategy_net(u, {})
    assert set(none.net.transitions) == {"1_robot", "2_robots"}
    winning = build_strategy_net(u, {StrategyVar(p, t): True for p, t in
                                  [("robot1", "repair1"), ("robot1'", "repair1"),
                                   ("robot2", "ignore2"), ("robot2'", "repair2")]})
    assert set(winning.net.transitions) == {"1_robot", "2_robots", "repair1", "repair1'", "ignore2", "repair2'"}


class Lying:
    """Claims SAT with an all-true witness, which loses the production line game."""

    def __call__(self, q):
        return SolveResult(SAT, {v: True for v in q.strategy_vars}, "liar")


def test_soundness_alarm(pl2, tmp_path):
    with pytest.raises(SoundnessAlarm) as info:
        synthesize(pl2, "tc", schedule=[(2, 3)], backend=Lying(), artifact_dir=str(tmp_path))
    assert info.value.report
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["true_concurrent_b2_n3.pgstrat", "true_concurrent_b2_n3.qcir"]
    assert (tmp_path / names[0]).read_text().startswith(".bound 2\n")


def test_unknown_answers_keep_searching(pl2):
    run = synthesize(pl2, "tc", schedule=[(1, 2), (1, 3)], backend=lambda q: SolveResult(UNKNOWN))
    assert [it.status for it in run.iterations] == [UNKNOWN, UNKNOWN]
    assert run.outcome == "exhausted"


@pytest.mark.parametrize("seed", range(4))
def test_completeness_against_strategy_enumeration(seed):
    rng = random.Random(seed)
    checked = 0
    while checked < 25:
        g = random_game(rng, max_places=5, max_transitions=4)
        bound = rng.choice([1, 2])
        u = unfold(g, bound)
        if len(strategy_roles(u)) > 10:
            continue
        top = len(u.net.reachable_markings()) + 1
        expected = winning_strategy_exists(g, bound)
        for kind in ("seq", "tc"):
            run = synthesize(g, kind, schedule=fixed_bound_schedule(bound, top, 2))
            assert run.found == expected, (kind, g.net.flow, bound)
        checked += 1
