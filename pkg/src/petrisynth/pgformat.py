"""Line-based text formats for games (``.pg``) and strategies (``.pgstrat``).

A game file has three sections::

    # comment
    .places
    env env init        # flags: env, bad, init; no env flag means system place
    bot bad
    .transitions
    t
    .flows
    t: {env} -> {bot}

A strategy file lists the bound and every allowed
``(place copy, original transition)`` pair::

    .bound 2
    robot1 repair1
"""
import re

from .errors import InvalidNetError
from .game import PetriGame
from .net import PetriNet

NAME = re.compile(r"[A-Za-z0-9_']+")
FLAGS = ("env", "bad", "init")
_FLOW = re.compile(r"^(?P<t>\S+?)\s*:\s*\{(?P<pre>[^}]*)\}\s*->\s*\{(?P<post>[^}]*)\}\s*$")


class PgSyntaxError(InvalidNetError):
    """A malformed game or strategy file; carries the 1-based position."""

    def __init__(self, message, line=None, column=None):
        where = f"line {line}" + (f", column {column}" if column else "") if line else ""
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column


def _strip(raw):
    return raw.split("#", 1)[0].rstrip()


def _check_name(name, lineno, col):
    if not NAME.fullmatch(name):
        raise PgSyntaxError(f"invalid name {name!r}", lineno, col)


def _names(text, lineno, col):
    out = []
    for part in text.split(","):
        name = part.strip()
        if not name:
            continue
        _check_name(name, lineno, col)
        out.append(name)
    return out


def parse_pg(text):
    """Parse a ``.pg`` document into a :class:`PetriGame`."""
    section = None
    places, env, bad, init = [], [], [], []
    transitions = []
    flows = {}
    declared = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        body = line.strip()
        if body.startswith("."):
            if body not in (".places", ".transitions", ".flows"):
                raise PgSyntaxError(f"unknown section {body!r}", lineno, col)
            section = body
            continue
        if section is None:
            raise PgSyntaxError("content before the first section", lineno, col)
        if section == ".places":
            name, *flags = body.split()
            _check_name(name, lineno, col)
            if name in declared:
                raise PgSyntaxError(f"duplicate name {name!r}", lineno, col)
            declared.add(name)
            for f in flags:
                if f not in FLAGS:
                    raise PgSyntaxError(f"unknown place flag {f!r}", lineno, line.find(f) + 1)
            places.append(name)
            if "env" in flags:
                env.append(name)
            if "bad" in flags:
                bad.append(name)
            if "init" in flags:
                init.append(name)
        elif section == ".transitions":
            for name in body.split():
                _check_name(name, lineno, col)
                if name in declared:
                    raise PgSyntaxError(f"duplicate name {name!r}", lineno, col)
                declared.add(name)
                transitions.append(name)
        else:
            m = _FLOW.match(body)
            if not m:
                raise PgSyntaxError("expected 't: {p, ...} -> {p, ...}'", lineno, col)
            t = m["t"]
            if t not in transitions:
                raise PgSyntaxError(f"flow for undeclared transition {t!r}", lineno, col)
            if t in flows:
                raise PgSyntaxError(f"second flow line for {t!r}", lineno, col)
            pre = _names(m["pre"], lineno, col + m.start("pre"))
            post = _names(m["post"], lineno, col + m.start("post"))
            for p in pre + post:
                if p not in places:
                    raise PgSyntaxError(f"unknown place {p!r}", lineno, col + body.find(p))
            if not pre or not post:
                raise PgSyntaxError(f"transition {t!r} needs a non-empty preset and postset", lineno, col)
            flows[t] = (pre, post)
    for t in transitions:
        if t not in flows:
            raise PgSyntaxError(f"transition {t!r} has no flow line (empty preset and postset)")
    net = PetriNet.from_transitions(places, {t: flows[t] for t in transitions}, init)
    return PetriGame(net, environment=env, bad=bad)


def print_pg(game):
    """Canonical ``.pg`` text; ``parse_pg(print_pg(g)) == g``."""
    net = game.net
    lines = [".places"]
    for p in net.places:
        flags = [f for f, on in (("env", p in game.environment_places), ("bad", p in game.bad_places),
                                 ("init", p in net.initial)) if on]
        lines.append(" ".join([p] + flags))
    lines.append(".transitions")
    lines.extend(net.transitions)
    lines.append(".flows")
    for t in net.transitions:
        lines.append(f"{t}: {{{', '.join(net.sort(net.preset(t)))}}} -> {{{', '.join(net.sort(net.postset(t)))}}}")
    return "\n".join(lines) + "\n"


def load_pg(path):
    with open(path) as fh:
        return parse_pg(fh.read())


def print_pgstrat(bound, pairs):
    """Strategy listing for ``pairs`` of (place copy, original transition)."""
    lines = [f".bound {bound}"]
    lines.extend(f"{p} {t}" for p, t in sorted(pairs))
    return "\n".join(lines) + "\n"


def parse_pgstrat(text):
    """Return ``(bound, [(place copy, original transition), ...])``."""
    bound = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw).strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == ".bound":
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise PgSyntaxError("expected '.bound <positive integer>'", lineno, 1)
            bound = int(parts[1])
            continue
        if len(parts) != 2:
            raise PgSyntaxError("expected '<place> <transition>'", lineno, 1)
        for i, name in enumerate(parts):
            _check_name(name, lineno, line.find(name) + 1)
        pairs.append((parts[0], parts[1]))
    if bound is None:
        raise PgSyntaxError("missing '.bound' line")
    return bound, pairs
