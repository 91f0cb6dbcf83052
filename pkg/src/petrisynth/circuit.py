"""Hash-consed boolean circuits with constant folding.

Variables and gates share one positive id space.  A literal is a signed id
(negative means negated) or one of the Python constants ``True``/``False``.
Gates are created after their children, so increasing id order is a
topological order.
"""
import itertools

AND = "and"
OR = "or"
VAR = "var"


class Circuit:
    """A DAG of ``and``/``or`` gates over variables."""

    def __init__(self):
        self.kind = [None]          # index 0 unused
        self.children = [()]
        self._cache = {}

    def copy(self):
        c = Circuit()
        c.kind = list(self.kind)
        c.children = list(self.children)
        c._cache = dict(self._cache)
        return c

    def __len__(self):
        return len(self.kind) - 1

    @property
    def max_id(self):
        return len(self.kind) - 1

    def new_var(self):
        self.kind.append(VAR)
        self.children.append(())
        return len(self.kind) - 1

    def is_var(self, i):
        return self.kind[abs(i)] == VAR

    def gates(self):
        return [i for i in range(1, len(self.kind)) if self.kind[i] != VAR]

    # -- construction --------------------------------------------------

    def _gate(self, op, lits):
        absorbing = op == OR        # True absorbs OR, False absorbs AND
        kept = set()
        for x in lits:
            if x is True or x is False:
                if x is absorbing:
                    return absorbing
                continue
            if -x in kept:
                return absorbing
            kept.add(x)
        if not kept:
            return not absorbing
        if len(kept) == 1:
            return kept.pop()
        key = (op, tuple(sorted(kept, key=lambda v: (abs(v), v < 0))))
        g = self._cache.get(key)
        if g is None:
            self.kind.append(op)
            self.children.append(key[1])
            g = len(self.kind) - 1
            self._cache[key] = g
        return g

    def and_(self, *lits):
        return self._gate(AND, _flat(lits))

    def or_(self, *lits):
        return self._gate(OR, _flat(lits))

    @staticmethod
    def not_(x):
        if x is True or x is False:
            return not x
        return -x

    def implies(self, a, b):
        return self.or_(self.not_(a), b)

    def iff(self, a, b):
        return self.and_(self.implies(a, b), self.implies(b, a))

    # -- analysis ------------------------------------------------------

    def cone(self, output):
        """Gate ids reachable from ``output`` in increasing order."""
        if output is True or output is False:
            return []
        seen = set()
        stack = [abs(output)]
        while stack:
            g = stack.pop()
            if g in seen or self.kind[g] == VAR:
                continue
            seen.add(g)
            stack.extend(abs(c) for c in self.children[g])
        return sorted(seen)

    def support(self, output):
        """Variable ids the output depends on."""
        if output is True or output is False:
            return set()
        out = set()
        for g in self.cone(output) or [abs(output)]:
            if self.kind[g] == VAR:
                out.add(g)
            for c in self.children[g]:
                if self.kind[abs(c)] == VAR:
                    out.add(abs(c))
        return out

    def evaluate(self, output, assignment):
        """Evaluate under ``{var: bool}``; missing variables are an error."""
        if output is True or output is False:
            return output
        values = {}

        def lit(x):
            v = values[abs(x)] if self.kind[abs(x)] != VAR else assignment[abs(x)]
            return v if x > 0 else not v

        for g in self.cone(output):
            kids = self.children[g]
            if self.kind[g] == AND:
                values[g] = all(lit(c) for c in kids)
            else:
                values[g] = any(lit(c) for c in kids)
        return lit(output)

    def substitute(self, output, assignment, target=None):
        """Partially evaluate: variables in ``assignment`` become constants.

        The simplified circuit is rebuilt inside ``target`` (a fresh circuit
        when omitted) using the same variable ids; returns ``(target, literal)``.
        Only meaningful when ``target`` has those ids as variables.
        """
        if target is None:
            target = Circuit()
            while target.max_id < self.max_id:
                target.new_var()
        if output is True or output is False:
            return target, output
        values = {}

        def lit(x):
            a = abs(x)
            if self.kind[a] == VAR:
                v = assignment.get(a, a)
            else:
                v = values[a]
            if x > 0:
                return v
            return target.not_(v)

        for g in self.cone(output):
            kids = [lit(c) for c in self.children[g]]
            values[g] = target.and_(*kids) if self.kind[g] == AND else target.or_(*kids)
        return target, lit(output)

    def tseitin(self, output):
        """Clauses defining every gate of the cone of ``output``.

        Gate ids double as the auxiliary variables.  The output itself is
        not asserted.
        """
        clauses = []
        for g in self.cone(output):
            kids = self.children[g]
            if self.kind[g] == AND:
                for c in kids:
                    clauses.append([-g, c])
                clauses.append([g] + [-c for c in kids])
            else:
                for c in kids:
                    clauses.append([g, -c])
                clauses.append([-g] + list(kids))
        return clauses


def _flat(lits):
    out = []
    for x in lits:
        if isinstance(x, (list, tuple, set, frozenset)) or hasattr(x, "__next__"):
            out.extend(_flat(x))
        else:
            out.append(x)
    return out


def bit_patterns(count):
    """``count`` integers whose bits enumerate all assignments of ``count``
    variables: bit ``k`` of pattern ``j`` is bit ``j`` of ``k``."""
    size = 1 << count
    full = (1 << size) - 1
    out = []
    for j in range(count):
        half = 1 << j
        p = ((1 << half) - 1) << half
        length = half << 1
        while length < size:
            p |= p << length
            length <<= 1
        out.append(p & full)
    return out, full


def evaluate_parallel(circuit, output, fixed, parallel_vars):
    """Evaluate for every assignment of ``parallel_vars`` at once.

    ``fixed`` maps the remaining variables to booleans.  Returns an integer
    whose bit ``k`` is the value under assignment number ``k``.
    """
    patterns, full = bit_patterns(len(parallel_vars))
    values = {v: p for v, p in zip(parallel_vars, patterns)}
    for v, b in fixed.items():
        values[v] = full if b else 0
    if output is True or output is False:
        return full if output else 0

    def lit(x):
        v = values[abs(x)]
        return v if x > 0 else full ^ v

    for g in circuit.cone(output):
        kids = circuit.children[g]
        if circuit.kind[g] == AND:
            acc = full
            for c in kids:
                acc &= lit(c)
                if not acc:
                    break
        else:
            acc = 0
            for c in kids:
                acc |= lit(c)
                if acc == full:
                    break
        values[g] = acc
    return lit(output)


def assignments(variables):
    """All assignments in lexicographic order, ``False`` before ``True``."""
    variables = list(variables)
    for bits in itertools.product((False, True), repeat=len(variables)):
        yield dict(zip(variables, bits))
