"""Deciding QBF problems and emitting them as QCIR or QDIMACS.

Three backends share one interface (a callable from problem to
:class:`SolveResult`):

* :class:`BruteForceBackend` enumerates every assignment; it is the oracle.
* :class:`InternalBackend` decides exists-forall problems by counterexample
  refinement on top of two SAT solvers from python-sat.
* :class:`ExternalBackend` runs any QBF solver binary on a temporary file.
"""
import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field

from pysat.solvers import Solver

from .circuit import Circuit, assignments, evaluate_parallel
from .errors import PetriError, ResourceLimitError

SAT = "SAT"
UNSAT = "UNSAT"
UNKNOWN = "Unknown"

#: default caps of the brute-force evaluator
MAX_BRUTE_EXISTS = 22
MAX_BRUTE_FORALL = 24
#: default timeout of external solver calls in seconds
DEFAULT_TIMEOUT = 1800
#: environment variable holding the default external solver command
SOLVER_ENV = "PETRISYNTH_QBF_SOLVER"
#: environment variable selecting the file format for that solver
FORMAT_ENV = "PETRISYNTH_QBF_FORMAT"


@dataclass
class SolveResult:
    status: str
    witness: dict = None
    solver: str = ""
    wall_time: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    @property
    def sat(self):
        return self.status == SAT


def _split_prefix(q):
    """Return (exists, forall) for problems of shape [exists][forall]."""
    blocks = [(qq, vs) for qq, vs in q.prefix if vs]
    shape = [qq for qq, _ in blocks]
    if shape not in ([], ["exists"], ["forall"], ["exists", "forall"]):
        raise ValueError(f"only exists-forall prefixes are supported, got {shape}")
    exists = [v for qq, vs in blocks if qq == "exists" for v in vs]
    forall = [v for qq, vs in blocks if qq == "forall" for v in vs]
    return exists, forall


def eval_bruteforce(q, max_exists=MAX_BRUTE_EXISTS, max_forall=MAX_BRUTE_FORALL):
    """Decide ``q`` by enumeration; the witness is the lexicographically
    first winning assignment of the existential block."""
    start = time.perf_counter()
    exists, forall = _split_prefix(q)
    q.check_closed()
    if len(exists) > max_exists or len(forall) > max_forall:
        raise ResourceLimitError(f"{len(exists)} existential / {len(forall)} universal variables "
                                 f"exceed the caps {max_exists} / {max_forall}")
    full = (1 << (1 << len(forall))) - 1
    for e in assignments(exists):
        if evaluate_parallel(q.circuit, q.output, e, forall) == full:
            return SolveResult(SAT, e, "bruteforce", time.perf_counter() - start)
    return SolveResult(UNSAT, None, "bruteforce", time.perf_counter() - start)


class BruteForceBackend:
    name = "bruteforce"

    def __init__(self, max_exists=MAX_BRUTE_EXISTS, max_forall=MAX_BRUTE_FORALL):
        self.max_exists = max_exists
        self.max_forall = max_forall

    def __call__(self, q):
        return eval_bruteforce(q, self.max_exists, self.max_forall)


def _add_instance(solver, circuit, output, fixed, next_id):
    """Add ``output`` with ``fixed`` substituted, asserted true.

    Fresh ids for the simplified gates start at ``next_id``; returns the next
    free id, or ``None`` when the instance is constant false.
    """
    values = {}

    def lit(x):
        a = abs(x)
        v = fixed.get(a, a) if circuit.kind[a] == "var" else values[a]
        if x > 0 or v is True or v is False:
            return v if x > 0 else not v
        return -v

    for g in circuit.cone(output):
        kids = [lit(k) for k in circuit.children[g]]
        is_and = circuit.kind[g] == "and"
        absorbing = not is_and
        if any(k is absorbing for k in kids):
            values[g] = absorbing
            continue
        kids = [k for k in kids if k is not True and k is not False]
        if not kids:
            values[g] = is_and
        elif len(kids) == 1:
            values[g] = kids[0]
        else:
            g2 = next_id
            next_id += 1
            if is_and:
                for k in kids:
                    solver.add_clause([-g2, k])
                solver.add_clause([g2] + [-k for k in kids])
            else:
                for k in kids:
                    solver.add_clause([g2, -k])
                solver.add_clause([-g2] + kids)
            values[g] = g2
    out = lit(output) if output is not True and output is not False else output
    if out is False:
        return None
    if out is not True:
        solver.add_clause([out])
    return next_id


class InternalBackend:
    """Counterexample-guided solving of exists-forall problems.

    A candidate solver proposes strategy assignments; a verifier searches a
    universal assignment falsifying the matrix under that candidate.  Each
    counterexample is substituted into the matrix and added to the candidate
    solver, so the loop terminates after at most 2^|exists| rounds.
    """

    name = "internal"

    def __init__(self, sat_solver="cadical153", max_rounds=None):
        self.sat_solver = sat_solver
        self.max_rounds = max_rounds

    def __call__(self, q):
        start = time.perf_counter()
        exists, forall = _split_prefix(q)
        q.check_closed()
        c, out = q.circuit, q.output
        rounds = 0

        def done(status, witness=None):
            return SolveResult(status, witness, self.name, time.perf_counter() - start,
                               {"rounds": rounds})

        if out is True:
            return done(SAT, {v: False for v in exists})
        if out is False:
            return done(UNSAT)
        with Solver(name=self.sat_solver) as verifier, Solver(name=self.sat_solver) as candidate:
            for cl in c.tseitin(out):
                verifier.add_clause(cl)
            verifier.add_clause([-out])
            next_id = c.max_id + 1
            while True:
                rounds += 1
                if self.max_rounds is not None and rounds > self.max_rounds:
                    return done(UNKNOWN)
                if not candidate.solve():
                    return done(UNSAT)
                model = set(l for l in candidate.get_model() if l > 0)
                witness = {v: v in model for v in exists}
                assumptions = [v if witness[v] else -v for v in exists]
                if not verifier.solve(assumptions=assumptions):
                    return done(SAT, witness)
                cex = set(l for l in verifier.get_model() if l > 0)
                fixed = {v: v in cex for v in forall}
                next_id = _add_instance(candidate, c, out, fixed, next_id)
                if next_id is None:
                    return done(UNSAT)


# -- file formats ------------------------------------------------------


def _gate_line(c, g):
    kids = ", ".join(str(k) for k in c.children[g])
    return f"{g} = {c.kind[g]}({kids})"


def to_qcir(q):
    """QCIR-G14 text of ``q``; constants become empty ``and``/``or`` gates."""
    c = q.circuit
    lines = ["#QCIR-G14"]
    for quant, vs in q.prefix:
        if vs:
            lines.append(f"{quant}({', '.join(str(v) for v in vs)})")
    out = q.output
    gates = c.cone(out)
    if out is True or out is False:
        const = c.max_id + 1
        lines.append(f"output({const})")
        lines.append(f"{const} = {'and' if out else 'or'}()")
    else:
        lines.append(f"output({out})")
        lines.extend(_gate_line(c, g) for g in gates)
    return "\n".join(lines) + "\n"


def to_qdimacs(q):
    """Tseitin-transformed QDIMACS text of ``q``.

    Each gate of the matrix becomes an auxiliary variable (its own id) in a
    final existential block; adjacent blocks with equal quantifiers are
    merged.
    """
    c = q.circuit
    out = q.output
    gates = c.cone(out)
    clauses = c.tseitin(out)
    if out is False:
        clauses.append([])
    elif out is not True:
        clauses.append([out])
    blocks = []
    for quant, vs in list(q.prefix) + [("exists", gates)]:
        if not vs:
            continue
        letter = "e" if quant == "exists" else "a"
        if blocks and blocks[-1][0] == letter:
            blocks[-1][1].extend(vs)
        else:
            blocks.append((letter, list(vs)))
    lines = [f"p cnf {c.max_id} {len(clauses)}"]
    for letter, vs in blocks:
        lines.append(f"{letter} {' '.join(str(v) for v in vs)} 0")
    for cl in clauses:
        lines.append(" ".join(str(l) for l in cl + [0]))
    return "\n".join(lines) + "\n"


WRITERS = {"qcir": to_qcir, "qdimacs": to_qdimacs}


def _status_from_output(text):
    for line in text.splitlines():
        tokens = line.strip().split()
        if not tokens:
            continue
        if tokens[0] == "s" and len(tokens) >= 3:
            if tokens[-1] == "1":
                return SAT
            if tokens[-1] == "0":
                return UNSAT
        word = tokens[-1].upper() if tokens[0] == "s" else tokens[0].upper()
        if word in ("SAT", "SATISFIABLE", "TRUE"):
            return SAT
        if word in ("UNSAT", "UNSATISFIABLE", "FALSE"):
            return UNSAT
    return UNKNOWN


def solve_external(q, cmd=None, fmt=None, timeout=DEFAULT_TIMEOUT, sat_codes=(10,), unsat_codes=(20,)):
    """Run an external QBF solver.

    ``cmd`` is a command template; ``{file}`` is replaced by the path of the
    formula file, otherwise the formula is piped to standard input.  The exit
    code decides the status; when it matches neither convention the output is
    scanned for a ``s cnf 1``/``s cnf 0`` or SAT/UNSAT line.
    """
    cmd = cmd or os.environ.get(SOLVER_ENV)
    fmt = fmt or os.environ.get(FORMAT_ENV, "qcir")
    if not cmd:
        raise PetriError(f"no external solver configured (set {SOLVER_ENV})")
    if fmt not in WRITERS:
        raise ValueError(f"unknown format {fmt!r}")
    text = WRITERS[fmt](q)
    start = time.perf_counter()
    suffix = ".qcir" if fmt == "qcir" else ".qdimacs"
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "formula" + suffix)
        with open(path, "w") as fh:
            fh.write(text)
        uses_file = "{file}" in cmd
        argv = [a.replace("{file}", path) for a in shlex.split(cmd)]
        diag = {"command": argv, "format": fmt}
        try:
            proc = subprocess.run(argv, input=None if uses_file else text, capture_output=True,
                                  text=True, timeout=timeout)
        except subprocess.TimeoutExpired:
            diag["error"] = f"timeout after {timeout}s"
            return SolveResult(UNKNOWN, None, argv[0], time.perf_counter() - start, diag)
        except OSError as exc:
            diag["error"] = str(exc)
            return SolveResult(UNKNOWN, None, argv[0], time.perf_counter() - start, diag)
    elapsed = time.perf_counter() - start
    diag["returncode"] = proc.returncode
    if proc.returncode in sat_codes:
        status = SAT
    elif proc.returncode in unsat_codes:
        status = UNSAT
    else:
        status = _status_from_output(proc.stdout)
        if status == UNKNOWN:
            diag["stdout"] = proc.stdout[-2000:]
            diag["stderr"] = proc.stderr[-2000:]
    return SolveResult(status, None, argv[0], elapsed, diag)


class ExternalBackend:
    name = "external"

    def __init__(self, cmd=None, fmt=None, timeout=DEFAULT_TIMEOUT, sat_codes=(10,), unsat_codes=(20,)):
        self.cmd = cmd
        self.fmt = fmt
        self.timeout = timeout
        self.sat_codes = sat_codes
        self.unsat_codes = unsat_codes

    def __call__(self, q):
        return solve_external(q, self.cmd, self.fmt, self.timeout, self.sat_codes, self.unsat_codes)


def extract_strategy(q, backend, result=None):
    """Assignment of the strategy block of a satisfiable ``q``.

    A witness reported by the backend is used as is.  Otherwise variables are
    pinned one by one: true when the pinned problem stays satisfiable, false
    otherwise; the complete assignment is checked with one final call.
    """
    if result is None:
        result = backend(q)
    if result.status != SAT:
        raise PetriError(f"cannot extract a strategy from a {result.status} problem")
    svars = q.strategy_vars
    if result.witness is not None:
        return {v: bool(result.witness.get(v, False)) for v in svars}
    pins = {}
    for v in svars:
        trial = dict(pins)
        trial[v] = True
        pins[v] = backend(q.pinned(trial)).status == SAT
    if backend(q.pinned(pins)).status != SAT:
        raise PetriError("solver answers are inconsistent: the pinned strategy is not satisfiable")
    return pins


def check_witness(q, witness, max_forall=MAX_BRUTE_FORALL):
    """Whether ``witness`` makes the matrix true for all universal values
    (enumeration, so only for small universal blocks)."""
    _, forall = _split_prefix(q)
    if len(forall) > max_forall:
        raise ResourceLimitError(f"{len(forall)} universal variables exceed {max_forall}")
    full = (1 << (1 << len(forall))) - 1
    return evaluate_parallel(q.circuit, q.output, witness, forall) == full


def make_backend(name="internal", **kwargs):
    if name == "internal":
        return InternalBackend(**kwargs)
    if name == "bruteforce":
        return BruteForceBackend(**kwargs)
    if name == "external":
        return ExternalBackend(**kwargs)
    raise ValueError(f"unknown backend {name!r}")


__all__ = ["SolveResult", "SAT", "UNSAT", "UNKNOWN", "eval_bruteforce", "BruteForceBackend",
           "InternalBackend", "ExternalBackend", "to_qcir", "to_qdimacs", "solve_external",
           "extract_strategy", "check_witness", "make_backend", "Circuit"]
