"""
Comparing the two encodings on benchmark families
=================================================

Every family is generated from a size parameter.  The suite runs both
encodings with a fixed bound and lengths 1, 2, ... and counts the
iterations until a strategy appears.
"""

# %%
from petrisynth.bench import generate, run_suite
from petrisynth.pgformat import print_pg

# a single worker document workflow, as a .pg file
print(print_pg(generate("DW", 1).game))

# %%
rows, text = run_suite(["PL", "DW"], [1, 2, 3], max_n=24)
print(text)

# %%
# The true-concurrent encoding never needs more iterations, and for the
# production line it needs the same number whatever the number of robots.
by_key = {(r["family"], r["param"], r["encoding"]): r["iterations"] for r in rows}
for family in ("PL", "DW"):
    for m in (1, 2, 3):
        seq, tc = by_key[family, m, "seq"], by_key[family, m, "tc"]
        print(f"{family}({m}): seq {seq}, tc {tc}")
