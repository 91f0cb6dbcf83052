"""Bounded synthesis for safety Petri games.

Typical use::

    from petrisynth import load_example, synthesize
    game = load_example("production_line_2.pg")
    run = synthesize(game, "true_concurrent")
"""
from importlib import resources

from .bench import generate, random_game, run_suite
from .encoding import encode_sequential, encode_true_concurrent, formula_stats, max_simulation_length
from .errors import (ConflictError, FiringError, InvalidNetError, NonDeterminismError, PetriError,
                     ReorderError, ResourceLimitError, SoundnessAlarm, UnknownNodeError, UnsafeNetError)
from .game import (PetriGame, StrategyNet, Violation, check_e1_explicit_choice, check_e2_environment_refusal,
                   check_e3_progress, check_s1_determinism, check_s2_system_refusal,
                   check_s3_deadlock_avoidance, enumerate_environment_strategies, has_unique_run,
                   is_winning_system, restrict, winning_report)
from .net import PetriNet
from .pgformat import parse_pg, parse_pgstrat, print_pg, print_pgstrat
from .semantics import (SeqTrace, TcTrace, max_concurrent_set, reach_tc, reaches_bad, reorder_adjacent,
                        seq_to_tc, tc_fire, tc_to_seq)
from .solving import (InternalBackend, BruteForceBackend, ExternalBackend, eval_bruteforce, extract_strategy,
                      solve_external, to_qcir, to_qdimacs)
from .synthesis import build_strategy_net, synthesize, validate_strategy
from .unfolding import BoundedUnfolding, unfold, verify_homomorphism

__version__ = "0.1.0"


def example_text(name):
    """Text of a shipped example file."""
    return resources.files(__package__).joinpath("data", name).read_text()


def load_example(name):
    return parse_pg(example_text(name))
