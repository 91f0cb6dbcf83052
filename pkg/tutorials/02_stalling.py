"""
Why the environment may stall transitions
=========================================

A system place ``sys`` must allow both ``t4`` and ``t6``, otherwise some
environment behaviour deadlocks it.  After ``t3`` and ``t5`` both are
enabled together, which a winning strategy must never allow.
"""

# %%
from petrisynth import load_example, synthesize, unfold
from petrisynth.encoding import StrategyVar, encode_true_concurrent
from petrisynth.solving import InternalBackend

game = load_example("nondeterminism.pg")
for kind in ("sequential", "true_concurrent"):
    run = synthesize(game, kind)
    print(f"{kind:16s} {run.outcome} after {len(run.iterations)} iterations")

# %%
# Fix the strategy that keeps t4 and t6 and ask each encoding whether it
# wins.  Without stall variables the concurrent step fires t4 as soon as
# e1 is marked, so the bad marking {e1, e4, sys} never shows up.
backend = InternalBackend()
u = unfold(game, 1)
for stalling in (True, False):
    q = encode_true_concurrent(u, 5, stalling=stalling)
    pins = {q.registry[StrategyVar("sys", t)]: True for t in ("t4", "t6")}
    status = backend(q.pinned(pins)).status
    print(f"stalling={stalling!s:5s}: {status}")
