#!/usr/bin/env python3
"""Tiny reference QBF solver for QCIR-G14 and QDIMACS files.

Deliberately naive and independent of petrisynth: prefix expansion by brute
force, with a small DPLL for the innermost existential block of QDIMACS.
Exit code 10 means true, 20 means false.
"""
import re
import sys

GATE = re.compile(r"^\s*(-?\w+)\s*=\s*(and|or)\s*\((.*)\)\s*$")
QUANT = re.compile(r"^\s*(exists|forall)\s*\((.*)\)\s*$")
OUTPUT = re.compile(r"^\s*output\s*\(\s*(-?\w+)\s*\)\s*$")


def parse_qcir(text):
    prefix, gates, out = [], {}, None
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        m = QUANT.match(line)
        if m:
            vs = [int(v) for v in m[2].split(",") if v.strip()]
            prefix.append((m[1], vs))
            continue
        m = OUTPUT.match(line)
        if m:
            out = int(m[1])
            continue
        m = GATE.match(line)
        if not m:
            raise ValueError(f"bad QCIR line {line!r}")
        kids = [int(k) for k in m[3].split(",") if k.strip()]
        gates[int(m[1])] = (m[2], kids)
    return prefix, gates, out


def eval_qcir(gates, out, env):
    memo = {}

    def val(lit):
        v = abs(lit)
        if v in gates:
            if v not in memo:
                op, kids = gates[v]
                memo[v] = all(map(val, kids)) if op == "and" else any(map(val, kids))
            r = memo[v]
        else:
            r = env[v]
        return r if lit > 0 else not r
    return val(out)


def expand(prefix, env, leaf):
    if not prefix:
        return leaf(env)
    (q, vs), rest = prefix[0], prefix[1:]
    if not vs:
        return expand(rest, env, leaf)
    v, more = vs[0], vs[1:]
    branches = (expand([(q, more)] + rest, {**env, v: b}, leaf) for b in (False, True))
    return any(branches) if q == "exists" else all(branches)


def parse_qdimacs(text):
    prefix, clauses, header = [], [], None
    for line in text.splitlines():
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            header = (int(tok[2]), int(tok[3]))
        elif tok[0] in ("e", "a"):
            assert tok[-1] == "0"
            prefix.append(("exists" if tok[0] == "e" else "forall", [int(v) for v in tok[1:-1]]))
        else:
            lits = [int(v) for v in tok]
            assert lits[-1] == 0
            clauses.append(lits[:-1])
    assert header is not None and header[1] == len(clauses), "header clause count"
    return header, prefix, clauses


def dpll(clauses, env):
    env = dict(env)
    while True:
        simplified = []
        unit = None
        for cl in clauses:
            if any(env.get(abs(l)) == (l > 0) for l in cl):
                continue
            rest = [l for l in cl if abs(l) not in env]
            if not rest:
                return False
            if len(rest) == 1 and unit is None:
                unit = rest[0]
            simplified.append(rest)
        if not simplified:
            return True
        if unit is None:
            break
        env[abs(unit)] = unit > 0
    v = abs(simplified[0][0])
    return dpll(simplified, {**env, v: True}) or dpll(simplified, {**env, v: False})


def solve_text(text):
    if text.lstrip().startswith("#QCIR"):
        prefix, gates, out = parse_qcir(text)
        return expand(prefix, {}, lambda env: eval_qcir(gates, out, env))
    _, prefix, clauses = parse_qdimacs(text)
    # the innermost existential block is left to DPLL
    if prefix and prefix[-1][0] == "exists":
        prefix = prefix[:-1]
    return expand(prefix, {}, lambda env: dpll(clauses, env))


def main(argv):
    text = open(argv[1]).read() if len(argv) > 1 else sys.stdin.read()
    result = solve_text(text)
    print("s cnf", 1 if result else 0)
    return 10 if result else 20


if __name__ == "__main__":
    sys.exit(main(sys.argv))
