import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from games import BOTH_REPAIR_REMOVALS, nondeterminism_game, production_line_game
from helpers import random_strategy, unfolded_acyclic_games
from petrisynth.bench import random_game
from petrisynth.errors import InvalidNetError
from petrisynth.game import (PetriGame, check_e1_explicit_choice, check_e2_environment_refusal, check_e3_progress,
                             check_s1_determinism, check_s2_system_refusal, check_s3_deadlock_avoidance,
                             enumerate_environment_strategies, has_unique_run, is_winning_system, restrict,
                             winning_report)
from petrisynth.net import PetriNet
from petrisynth.semantics import SeqTrace, reaches_bad
from petrisynth.unfolding import unfold

WINNING_PLACES = {"env", "env1", "env1'", "robot1", "robot1'", "env2", "env2'", "robot2", "robot2'",
               "repaired1", "repaired1'", "ignored2", "repaired2'", "1_robot_check", "2_robots_check"}
WINNING_TRANSITIONS = {"1_robot", "2_robots", "repair1", "repair1'", "ignore2", "repair2'"}


def test_game_classification(pl2):
    assert pl2.system_places == {"robot1", "robot2", "ignored1", "repaired1", "ignored2", "repaired2", "bot"}
    assert pl2.bad_places == {"bot"}
    with pytest.raises(InvalidNetError):
        PetriGame(pl2.net, environment=["nowhere"])


def test_restrict_identity(pl2_unfolding):
    s = restrict(pl2_unfolding, set())
    assert s.net == pl2_unfolding.net
    assert s.kind == "system"


def test_restrict_builds_the_winning_strategy(winning):
    assert set(winning.net.places) == WINNING_PLACES
    assert set(winning.net.transitions) == WINNING_TRANSITIONS
    assert {winning.label[t] for t in winning.net.transitions} == {"1_robot", "2_robots", "repair1", "ignore2", "repair2"}


def test_restrict_everything_out_of_the_initial_marking(pl2):
    s = restrict(pl2, {"1_robot", "2_robots"})
    assert set(s.net.places) == {"env"}
    assert s.net.transitions == ()


def test_restrict_rejects_unknown(pl2):
    with pytest.raises(InvalidNetError):
        restrict(pl2, {"fly"})


def test_s1(winning):
    assert check_s1_determinism(winning) == []
    s = restrict(nondeterminism_game(), set())
    found = [v for v in check_s1_determinism(s) if v.marking == {"e1", "e4", "sys"}]
    assert found and found[0].nodes == ("sys", "t4", "t6")


def test_s1_holds_when_every_system_place_has_one_successor():
    g = production_line_game()
    s = restrict(unfold(g, 2), {"ignore1", "ignore1'", "ignore2", "ignore2'"})
    assert all(len(s.net.postset(p)) <= 1 for p in s.net.places if p in s.game.system_places)
    assert check_s1_determinism(s) == []


def test_s2(winning, pl2_unfolding):
    # robot2 keeps ignore2 while its copy robot2' drops ignore2'
    assert check_s2_system_refusal(winning) == []
    s = restrict(pl2_unfolding, {"1_robot"})
    assert [v.nodes for v in check_s2_system_refusal(s)] == [("1_robot",)]


def test_s3(winning, pl2_unfolding):
    assert check_s3_deadlock_avoidance(winning) == []
    everything = restrict(pl2_unfolding, set(pl2_unfolding.net.transitions))
    violations = check_s3_deadlock_avoidance(everything)
    assert [v.marking for v in violations] == [{"env"}]
    refuses = restrict(pl2_unfolding, BOTH_REPAIR_REMOVALS | {"wrong_repair"})
    assert any(v.marking == {"repaired1", "repaired2", "1_robot_check"} for v in check_s3_deadlock_avoidance(refuses))


def test_environment_strategy_checks(repair_all):
    e = restrict(repair_all, {"2_robots"})
    assert e.kind == "environment"
    assert check_e1_explicit_choice(e) == []
    assert check_e2_environment_refusal(e) == []
    assert check_e3_progress(e) == []
    assert has_unique_run(e)
    trace = SeqTrace(e.net, ["1_robot", "repair1", "repair2", "wrong_repair"])
    assert reaches_bad(trace, e.game)


def test_e1_and_e2_violations(repair_all, winning):
    both = restrict(repair_all, set(), kind="environment")
    assert [v.nodes for v in check_e1_explicit_choice(both)] == [("env", "1_robot", "2_robots")]
    assert check_e2_environment_refusal(both) == []
    e = restrict(winning, {"ignore2"})
    assert [v.nodes for v in check_e2_environment_refusal(e)] == [("ignore2",)]


def test_e1_without_environment_places():
    net = PetriNet.from_transitions(["a", "b"], {"t": (["a"], ["b"])}, ["a"])
    s = restrict(PetriGame(net), set())
    e = restrict(s, set())
    assert check_e1_explicit_choice(e) == []


def test_e3(winning):
    stuck = restrict(winning, {"1_robot", "2_robots"})
    assert [v.marking for v in check_e3_progress(stuck)] == [{"env"}]
    net = PetriNet(["a"], [], [], ["a"])
    terminal = restrict(restrict(PetriGame(net, environment=["a"]), set()), set())
    assert check_e3_progress(terminal) == []


def test_winning(winning, repair_all):
    assert is_winning_system(winning)
    report = winning_report(repair_all)
    assert not is_winning_system(repair_all)
    assert any(v.rule == "bad" and v.marking & repair_all.game.bad_places for v in report)
    net = PetriNet(["b"], [], [], ["b"])
    assert not is_winning_system(restrict(PetriGame(net, bad=["b"]), set()))


def test_enumerate_environment_strategies(winning):
    strategies = list(enumerate_environment_strategies(winning))
    assert sorted(sorted(e.kept) for e in strategies) == [
        ["1_robot", "ignore2", "repair1"], ["2_robots", "repair1'", "repair2'"]]
    net = PetriNet.from_transitions(["e", "a", "b"], {"x": (["e"], ["a"]), "y": (["e"], ["b"])}, ["e"])
    s = restrict(PetriGame(net, environment=["e"]), set())
    assert len(list(enumerate_environment_strategies(s))) == 2
    sys_only = restrict(PetriGame(PetriNet.from_transitions(["a", "b"], {"t": (["a"], ["b"])}, ["a"])), set())
    only = list(enumerate_environment_strategies(sys_only))
    assert len(only) == 1 and only[0].net == sys_only.net


def test_has_unique_run_negative():
    net = PetriNet.from_transitions(["e", "a", "b"], {"x": (["e"], ["a"]), "y": (["e"], ["b"])}, ["e"])
    assert not has_unique_run(restrict(PetriGame(net), set()))


def test_unique_runs_of_winning_strategy(winning):
    assert all(has_unique_run(e) for e in enumerate_environment_strategies(winning))


@pytest.mark.parametrize("seed", range(4))
def test_unique_runs_on_random_deterministic_strategies(seed):
    checked = 0
    for g, u, rng in unfolded_acyclic_games(seed, 40):
        s = random_strategy(u, rng)
        if check_s1_determinism(s):
            continue
        for e in enumerate_environment_strategies(s):
            assert has_unique_run(e), (g.net.flow, sorted(e.kept))
            checked += 1
    assert checked > 0


@pytest.mark.parametrize("seed", range(4))
def test_winning_iff_no_environment_strategy_reaches_bad(seed):
    rng = random.Random(seed)
    for _ in range(40):
        g = random_game(rng)
        u = unfold(g, 2)
        s = random_strategy(u, rng)
        if check_s1_determinism(s) or check_s2_system_refusal(s) or check_s3_deadlock_avoidance(s):
            continue
        env_loses = any(m & s.game.bad_places for e in enumerate_environment_strategies(s)
                        for m in e.net.reachable_markings())
        assert is_winning_system(s) == (not env_loses)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 30))
def test_restrict_is_monotone(seed):
    rng = random.Random(seed)
    g = random_game(rng)
    ts = list(g.net.transitions)
    small = set(rng.sample(ts, rng.randint(0, len(ts))))
    large = small | set(rng.sample(ts, rng.randint(0, len(ts))))
    a, b = restrict(g, small), restrict(g, large)
    assert set(b.net.places) <= set(a.net.places)
    assert set(b.net.transitions) <= set(a.net.transitions)


def test_reports_are_deterministic(repair_all):
    assert winning_report(repair_all) == winning_report(restrict(repair_all.base, BOTH_REPAIR_REMOVALS))
