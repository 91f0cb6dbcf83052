"""
Synthesizing a strategy for the production line
===============================================

Two robots work on a product.  The environment decides whether one robot
or both must repair their feature; a robot cannot see this choice, it only
sees the tokens it synchronizes with.
"""

# %%
# The game ships with the package.
from petrisynth import load_example, synthesize, unfold
from petrisynth.semantics import enumerate_traces, format_trace
from petrisynth.synthesis import strategy_pairs

game = load_example("production_line_2.pg")
print(game)
print("environment places:", sorted(game.environment_places))

# %%
# A robot needs to remember which profile it is in, so one copy of each
# place is not enough.  With bound 2 every robot place gets a copy per
# profile.
for b in (1, 2):
    u = unfold(game, b)
    print(f"bound {b}: {len(u.net.places)} places, {len(u.net.transitions)} transitions")

# %%
# Run the synthesis loop with the true-concurrent encoding.  Each line is
# one (bound, length) pair handed to the QBF backend.
run = synthesize(game, "true_concurrent")
for it in run.iterations:
    print(f"b={it.bound} n={it.n:2d} {it.status}")
print("outcome:", run.outcome)

# %%
# The strategy lists, for each robot copy, the transitions it allows.
for place, transition in strategy_pairs(run.assignment):
    print(f"  {place:12s} {transition}")

# %%
# Under the strategy each robot decides independently, so the sequential
# semantics sees every interleaving of the two decisions while the
# true-concurrent semantics fires them in one step.
net = run.strategy.net
seq = enumerate_traces(net, "seq")
tc = enumerate_traces(net, "tc")
print(len(seq), "sequential traces of length", {len(t) for t in seq})
print(len(tc), "true-concurrent traces of length", {len(t) for t in tc})
print(format_trace(tc[0]))
