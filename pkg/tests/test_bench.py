import csv
import io
import random

import pytest

from games import PL2_ENV, production_line_game
from petrisynth.bench import CSV_HEADER, FAMILIES, generate, random_game, rows_to_csv, run_suite
from petrisynth.pgformat import print_pg
from petrisynth.semantics import enumerate_traces
from petrisynth.synthesis import fixed_bound_schedule, synthesize
from petrisynth.unfolding import unfold, verify_homomorphism


def test_pl2_is_the_running_example():
    inst = generate("PL", 2)
    assert inst.game == production_line_game()
    assert (len(inst.game.net.places), len(inst.game.net.transitions)) == (12, 10)
    assert inst.game.environment_places == set(PL2_ENV)
    assert inst.bound == 2 and inst.expected_realizable


@pytest.mark.parametrize("m", [1, 2, 3])
def test_pl_shape(m):
    g = generate("pl", m).game
    robots = [p for p in g.net.places if p.startswith("robot")]
    assert len(robots) == m
    assert len(g.net.postset("env")) == m


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("m", [1, 2, 3])
def test_instances_are_safe_and_deterministic(family, m):
    inst = generate(family, m)
    inst.game.net.reachable_markings()
    assert verify_homomorphism(unfold(inst.game, inst.bound)) == []
    assert print_pg(generate(family, m).game) == print_pg(inst.game)
    assert inst.bound == (m if family == "PL" else 1)


def test_generate_errors():
    with pytest.raises(ValueError):
        generate("XX", 1)
    for m in (0, -1, 1.0):
        with pytest.raises(ValueError):
            generate("PL", m)


@pytest.mark.parametrize("family", FAMILIES)
def test_small_instances_are_realizable(family):
    for m, kinds in ((1, ("seq", "tc")), (2, ("tc",))):
        inst = generate(family, m)
        for kind in kinds:
            run = synthesize(inst.game, kind, schedule=fixed_bound_schedule(inst.bound, 20))
            assert run.found, (family, m, kind)


def test_document_workflow_difference_of_one():
    for m in (1, 2):
        rows, _ = run_suite(["DW"], [m])
        seq, tc = (r["iterations"] for r in rows)
        assert seq - tc == 1


def test_run_suite_csv():
    rows, text = run_suite([], [1, 2])
    assert rows == [] and text == ",".join(CSV_HEADER) + "\n"
    rows, text = run_suite(["PL"], [1, 2])
    assert [(r["param"], r["encoding"]) for r in rows] == [(1, "seq"), (1, "tc"), (2, "seq"), (2, "tc")]
    parsed = list(csv.DictReader(io.StringIO(text)))
    assert len(parsed) == 4 and list(parsed[0]) == CSV_HEADER
    assert all(r["outcome"] == "strategy" for r in parsed)
    assert all(int(r["iterations"]) > 0 and float(r["runtime_s"]) >= 0 for r in parsed)
    assert rows_to_csv(rows) == text


def test_run_suite_records_exhaustion():
    rows, _ = run_suite(["CA"], [2], kinds=("sequential",), max_n=3)
    assert rows[0]["outcome"] == "exhausted" and rows[0]["iterations"] == ""


def test_random_game():
    a, b = random_game(7), random_game(random.Random(7))
    assert print_pg(a) == print_pg(b)
    rng = random.Random(5)
    for _ in range(50):
        g = random_game(rng, acyclic=True)
        assert len(g.environment_places) <= 2 and len(g.net.places) <= 6
        for tr in enumerate_traces(g.net, "seq", max_steps=50):
            assert len(tr) < 50
