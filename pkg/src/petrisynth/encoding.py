"""QBF encodings of bounded synthesis over a bounded unfolding.

Both encodings have the prefix ``exists strategy : forall markings
(and environment choices) : matrix``.  The sequential one lets a single
transition fire between two consecutive markings; the true-concurrent one
fires every enabled, non-stalled transition at once and resolves
environment conflicts through per-time choice variables.
"""
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import NamedTuple

from .circuit import Circuit

#: saturation point of :func:`max_simulation_length`
SIMULATION_LENGTH_CAP = 2 ** 62


class StrategyVar(NamedTuple):
    place: str
    transition: str         # original transition


class MarkingVar(NamedTuple):
    place: str
    time: int


class EnvChoiceVar(NamedTuple):
    place: str
    transition: str         # unfolded transition
    time: int


class StallVar(NamedTuple):
    transition: str


ROLE_NAMES = {StrategyVar: "strategy", MarkingVar: "marking",
              EnvChoiceVar: "env_choice", StallVar: "stall"}


class VarRegistry:
    """Bijection between variable roles and circuit variable ids."""

    def __init__(self, circuit):
        self.circuit = circuit
        self.by_role = {}
        self.by_id = {}

    def add(self, role):
        if role in self.by_role:
            raise ValueError(f"duplicate variable {role}")
        v = self.circuit.new_var()
        self.by_role[role] = v
        self.by_id[v] = role
        return v

    def __getitem__(self, role):
        return self.by_role[role]

    def get(self, role, default=None):
        return self.by_role.get(role, default)

    def __contains__(self, role):
        return role in self.by_role

    def role(self, v):
        return self.by_id[v]

    def of_type(self, cls):
        return [v for v, r in self.by_id.items() if type(r) is cls]

    def counts(self):
        c = Counter(ROLE_NAMES[type(r)] for r in self.by_id.values())
        return {name: c.get(name, 0) for name in ROLE_NAMES.values()}


@dataclass(eq=False)
class QbfProblem:
    """A closed prenex QBF over a circuit matrix.

    ``prefix`` is a list of ``(quantifier, [var ids])`` blocks with
    quantifier ``"exists"`` or ``"forall"``.  Gates are definitional and
    count as innermost existential auxiliaries.
    """

    circuit: Circuit = field(repr=False)
    prefix: list
    output: object
    registry: VarRegistry = field(default=None, repr=False)
    kind: str = "custom"
    n: int = 0
    unfolding: object = field(default=None, repr=False)

    @property
    def exists(self):
        return [v for q, vs in self.prefix if q == "exists" for v in vs]

    @property
    def forall(self):
        return [v for q, vs in self.prefix if q == "forall" for v in vs]

    @property
    def strategy_vars(self):
        """The outermost existential block."""
        if self.prefix and self.prefix[0][0] == "exists":
            return list(self.prefix[0][1])
        return []

    def pinned(self, assignment):
        """A copy whose matrix additionally forces ``{var: bool}``."""
        circuit = self.circuit.copy()
        lits = [v if b else -v for v, b in sorted(assignment.items())]
        out = circuit.and_(self.output, *lits)
        return QbfProblem(circuit, [(q, list(vs)) for q, vs in self.prefix], out,
                          self.registry, self.kind, self.n, self.unfolding)

    def check_closed(self):
        bound = {v for _, vs in self.prefix for v in vs}
        free = self.circuit.support(self.output) - bound
        if free:
            raise ValueError(f"matrix mentions unquantified variables {sorted(free)}")
        seen = set()
        for _, vs in self.prefix:
            if seen & set(vs):
                raise ValueError("a variable is quantified twice")
            seen |= set(vs)


def max_simulation_length(u):
    """Upper bound on the simulation length needed for completeness."""
    k = len(u.net.places)
    if k >= 62:
        warnings.warn(f"2^{k}+1 saturates at {SIMULATION_LENGTH_CAP}", stacklevel=2)
        return SIMULATION_LENGTH_CAP
    return 2 ** k + 1


class _Builder:
    """Shared pieces of both encodings."""

    def __init__(self, u, n):
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"simulation length must be a positive integer, got {n!r}")
        self.u = u
        self.n = n
        self.net = u.net
        self.system = u.game.system_places
        self.env = u.game.environment_places
        self.bad = u.game.bad_places
        self.label = u.label
        self.c = Circuit()
        self.reg = VarRegistry(self.c)
        net = self.net
        self.strategy = []
        for p in net.places:
            if p in self.system:
                originals = dict.fromkeys(self.label[t] for t in net.sort(net.postset(p)))
                for o in originals:
                    self.strategy.append(self.reg.add(StrategyVar(p, o)))
        self.markings = [self.reg.add(MarkingVar(p, i)) for i in range(1, n + 1) for p in net.places]

    def m(self, p, i):
        return self.reg[MarkingVar(p, i)]

    def s(self, p, t):
        return self.reg[StrategyVar(p, self.label[t])]

    def sys_pre(self, t):
        return self.net.sort(self.net.preset(t) & self.system)

    def allowed(self, t):
        return [self.s(p, t) for p in self.sys_pre(t)]

    def initial(self):
        c, net = self.c, self.net
        return c.and_([self.m(p, 1) if p in net.initial else -self.m(p, 1) for p in net.places])

    def nobadplace(self, i):
        return self.c.and_([-self.m(p, i) for p in self.net.sort(self.bad)])

    def deterministic(self, i):
        c, net = self.c, self.net
        ts = net.transitions
        out = []
        for a in range(len(ts)):
            for b in range(a + 1, len(ts)):
                t1, t2 = ts[a], ts[b]
                if not net.preset(t1) & net.preset(t2) & self.system:
                    continue
                lits = [-self.m(p, i) for p in net.sort(net.preset(t1) | net.preset(t2))]
                lits += [-x for x in self.allowed(t1)] + [-x for x in self.allowed(t2)]
                out.append(c.or_(lits))
        return c.and_(out)

    def deadlock(self, i):
        c, net = self.c, self.net
        return c.and_([c.or_([-self.m(p, i) for p in net.sort(net.preset(t))] + [-x for x in self.allowed(t)])
                       for t in net.transitions])

    def terminating(self, i):
        c, net = self.c, self.net
        return c.and_([c.or_([-self.m(p, i) for p in net.sort(net.preset(t))]) for t in net.transitions])

    def win(self, i):
        c = self.c
        return c.and_(self.nobadplace(i), self.deterministic(i), c.implies(self.deadlock(i), self.terminating(i)))

    def same(self, places, i1, i2):
        return self.c.and_([self.c.iff(self.m(p, i1), self.m(p, i2)) for p in places])

    def global_loop(self):
        n = self.n
        return self.c.or_([self.same(self.net.places, i1, i2)
                           for i1 in range(1, n + 1) for i2 in range(i1 + 1, n + 1)])

    def scc_loop(self):
        n = self.n
        c = self.c
        parts = []
        for group in self.net.sccs():
            places = self.net.sort(group)
            parts.append(c.or_([self.same(places, i1, i2)
                                for i1 in range(1, n + 1) for i2 in range(i1 + 1, n + 1)]))
        return c.and_(parts)

    def body(self, flow, loop):
        """Conjunction over i of sequence_i => win_i, with the loop check at n."""
        c = self.c
        parts = []
        sequence = self.initial()
        for i in range(1, self.n + 1):
            if i > 1:
                sequence = c.and_(sequence, flow(i - 1))
            if i < self.n:
                parts.append(c.implies(sequence, self.win(i)))
            else:
                parts.append(c.implies(sequence, c.and_(self.win(i), loop)))
        return c.and_(parts)

    def problem(self, kind, universal, output):
        q = QbfProblem(self.c, [("exists", self.strategy), ("forall", universal)], output,
                       self.reg, kind, self.n, self.u)
        return q


def encode_sequential(u, n):
    """Interleaving encoding: one transition per step, global loop check."""
    b = _Builder(u, n)
    c, net = b.c, b.net

    def seqflow(i):
        options = []
        for t in net.transitions:
            pre, post = net.preset(t), net.postset(t)
            lits = [b.m(p, i) for p in net.sort(pre)]
            lits += b.allowed(t)
            lits += [b.m(p, i + 1) for p in net.sort(post)]
            lits += [-b.m(p, i + 1) for p in net.sort(pre - post)]
            lits += [c.iff(b.m(p, i), b.m(p, i + 1)) for p in net.places if p not in pre and p not in post]
            options.append(c.and_(lits))
        return c.or_(options)

    out = b.body(seqflow, b.global_loop())
    return b.problem("sequential", b.markings, out)


def encode_true_concurrent(u, n, stalling=True, scc_loops=True):
    """True-concurrent encoding with environment choices and stalling.

    ``stalling=False`` drops the stall variables; that mode is unsound and
    only meant for diagnostics.  ``scc_loops=False`` uses the global loop
    check instead of the per-component one.
    """
    b = _Builder(u, n)
    c, net, reg = b.c, b.net, b.reg
    choice_vars = []
    # choice variables only for places that can actually choose
    choosers = [p for p in net.places if p in b.env and net.postset(p)]
    for i in range(1, n):
        for p in choosers:
            for t in net.sort(net.postset(p)):
                choice_vars.append(reg.add(EnvChoiceVar(p, t, i)))
    stall_vars = []
    if stalling:
        for t in net.transitions:
            if net.preset(t) & b.system:
                stall_vars.append(reg.add(StallVar(t)))

    enabled_cache = {}

    def enabled(i, t):
        key = (i, t)
        if key not in enabled_cache:
            pre = net.preset(t)
            lits = [b.m(p, i) for p in net.sort(pre)] + b.allowed(t)
            lits += [reg[EnvChoiceVar(p, t, i)] for p in net.sort(pre & b.env)]
            if stalling and pre & b.system:
                lits.append(reg[StallVar(t)])
            enabled_cache[key] = c.and_(lits)
        return enabled_cache[key]

    def tcflow(i):
        fire = []
        for t in net.transitions:
            pre, post = net.preset(t), net.postset(t)
            effect = [-b.m(p, i + 1) for p in net.sort(pre - post)] + [b.m(p, i + 1) for p in net.sort(post)]
            fire.append(c.implies(enabled(i, t), c.and_(effect)))
        update = []
        for p in net.places:
            touching = net.sort(net.preset(p) | net.postset(p))
            idle = c.and_([c.not_(enabled(i, t)) for t in touching])
            update.append(c.implies(idle, c.iff(b.m(p, i), b.m(p, i + 1))))
        return c.and_(c.and_(fire), c.and_(update))

    choice = []
    for i in range(1, n):
        for p in choosers:
            outs = net.sort(net.postset(p))
            choice.append(c.or_([c.and_([reg[EnvChoiceVar(p, t, i)]] +
                                        [-reg[EnvChoiceVar(p, t2, i)] for t2 in outs if t2 != t])
                                 for t in outs]))
    loop = b.scc_loop() if scc_loops else b.global_loop()
    out = c.implies(c.and_(choice), b.body(tcflow, loop))
    kind = "true_concurrent" if stalling else "true_concurrent_nostall"
    return b.problem(kind, b.markings + choice_vars + stall_vars, out)


ENCODERS = {"sequential": encode_sequential, "seq": encode_sequential,
            "true_concurrent": encode_true_concurrent, "tc": encode_true_concurrent}


def encode(u, n, kind):
    try:
        return ENCODERS[kind](u, n)
    except KeyError:
        raise ValueError(f"unknown encoding {kind!r}") from None


def formula_stats(q):
    """Variable counts per role plus gate counts of the matrix cone."""
    stats = {}
    if q.registry is not None:
        stats.update(q.registry.counts())
    gates = q.circuit.cone(q.output)
    kinds = Counter(q.circuit.kind[g] for g in gates)
    stats["exists"] = len(q.exists)
    stats["forall"] = len(q.forall)
    stats["and_gates"] = kinds.get("and", 0)
    stats["or_gates"] = kinds.get("or", 0)
    stats["gates"] = len(gates)
    stats["n"] = q.n
    return stats
