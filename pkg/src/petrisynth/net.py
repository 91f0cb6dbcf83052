"""1-bounded Petri nets: presets, firing, reachability, conflict and SCCs.

Markings are frozensets of place names.  Nets are immutable after
construction; every query is a pure function of the net.
"""
from collections import deque

from .errors import (FiringError, InvalidNetError, ResourceLimitError,
                     UnknownNodeError, UnsafeNetError)

#: default guard on the number of markings explored by :meth:`PetriNet.reachable_markings`
MAX_MARKINGS = 2 ** 20


class PetriNet:
    """A safe Petri net with ordered places and transitions.

    ``flow`` is an iterable of arcs ``(source, target)`` going either from a
    place to a transition or from a transition to a place.
    """

    def __init__(self, places, transitions, flow, initial=()):
        self.places = tuple(dict.fromkeys(places))
        self.transitions = tuple(dict.fromkeys(transitions))
        self._place_set = frozenset(self.places)
        self._transition_set = frozenset(self.transitions)
        clash = self._place_set & self._transition_set
        if clash:
            raise InvalidNetError(f"names used for places and transitions: {sorted(clash)}")
        self._index = {x: i for i, x in enumerate(self.places + self.transitions)}

        pre = {x: set() for x in self._index}
        post = {x: set() for x in self._index}
        for src, dst in flow:
            if src not in self._index:
                raise InvalidNetError(f"arc source {src!r} is not a node")
            if dst not in self._index:
                raise InvalidNetError(f"arc target {dst!r} is not a node")
            if (src in self._place_set) == (dst in self._place_set):
                raise InvalidNetError(f"arc {src!r} -> {dst!r} must connect a place and a transition")
            post[src].add(dst)
            pre[dst].add(src)
        self._pre = {x: frozenset(sorted(s, key=self._index.get)) for x, s in pre.items()}
        self._post = {x: frozenset(sorted(s, key=self._index.get)) for x, s in post.items()}

        for t in self.transitions:
            if not self._pre[t] or not self._post[t]:
                raise InvalidNetError(f"transition {t!r} needs a non-empty preset and postset")

        self.initial = frozenset(initial)
        unknown = self.initial - self._place_set
        if unknown:
            raise InvalidNetError(f"initial marking uses unknown places {sorted(unknown)}")

    @classmethod
    def from_transitions(cls, places, transitions, initial=()):
        """Build a net from ``{transition: (preset, postset)}``."""
        flow = []
        for t, (pre, post) in transitions.items():
            flow.extend((p, t) for p in pre)
            flow.extend((t, p) for p in post)
        return cls(places, list(transitions), flow, initial)

    # -- structure -----------------------------------------------------

    @property
    def flow(self):
        """All arcs as a sorted tuple of ``(source, target)`` pairs."""
        arcs = [(x, y) for x in self.places + self.transitions for y in self._post[x]]
        return tuple(sorted(arcs, key=lambda a: (self._index[a[0]], self._index[a[1]])))

    def is_place(self, node):
        return node in self._place_set

    def is_transition(self, node):
        return node in self._transition_set

    def __contains__(self, node):
        return node in self._index

    def order(self, node):
        """Position of ``node`` in the declaration order (places first)."""
        return self._index[node]

    def sort(self, nodes):
        return sorted(nodes, key=self._index.__getitem__)

    def preset(self, node):
        try:
            return self._pre[node]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node!r}") from None

    def postset(self, node):
        try:
            return self._post[node]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node!r}") from None

    def __eq__(self, other):
        if not isinstance(other, PetriNet):
            return NotImplemented
        return (self.places == other.places and self.transitions == other.transitions
                and self.flow == other.flow and self.initial == other.initial)

    def __hash__(self):
        return hash((self.places, self.transitions, self.flow, self.initial))

    def __repr__(self):
        return f"<PetriNet |P|={len(self.places)} |T|={len(self.transitions)}>"

    # -- token game ----------------------------------------------------

    def _transition(self, t):
        if t not in self._transition_set:
            raise UnknownNodeError(f"unknown transition {t!r}")
        return t

    def is_enabled(self, marking, t):
        return self._pre[self._transition(t)] <= marking

    def enabled(self, marking):
        """Transitions enabled at ``marking`` in declaration order."""
        return [t for t in self.transitions if self._pre[t] <= marking]

    def fire(self, marking, t):
        """Fire ``t`` and return the successor marking.

        Raises :class:`FiringError` when ``t`` is not enabled and
        :class:`UnsafeNetError` when the result would need two tokens on a place.
        """
        pre = self._pre[self._transition(t)]
        if not pre <= marking:
            missing = self.sort(pre - marking)
            raise FiringError(f"{t!r} is not enabled, missing tokens in {missing}")
        rest = marking - pre
        overflow = rest & self._post[t]
        if overflow:
            raise UnsafeNetError(f"firing {t!r} puts a second token on {self.sort(overflow)}")
        return rest | self._post[t]

    def reachable_markings(self, limit=MAX_MARKINGS):
        """All markings reachable from the initial marking (breadth first)."""
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            m = queue.popleft()
            for t in self.enabled(m):
                m2 = self.fire(m, t)
                if m2 not in seen:
                    if len(seen) >= limit:
                        raise ResourceLimitError(f"more than {limit} reachable markings")
                    seen.add(m2)
                    queue.append(m2)
        return seen

    def reachability_graph(self, limit=MAX_MARKINGS):
        """``{marking: [(transition, successor), ...]}`` for all reachable markings."""
        graph = {}
        queue = deque([self.initial])
        graph[self.initial] = None
        while queue:
            m = queue.popleft()
            edges = []
            for t in self.enabled(m):
                m2 = self.fire(m, t)
                edges.append((t, m2))
                if m2 not in graph:
                    if len(graph) >= limit:
                        raise ResourceLimitError(f"more than {limit} reachable markings")
                    graph[m2] = None
                    queue.append(m2)
            graph[m] = edges
        return graph

    # -- structural queries --------------------------------------------

    def forward_closure(self, node):
        """Nodes reachable from ``node`` along arcs, including ``node`` itself."""
        seen = {node}
        stack = [node]
        while stack:
            x = stack.pop()
            for y in self._post[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def in_conflict(self, x, y):
        """Structural conflict: some place ``p`` outside ``{x, y}`` reaches ``x``
        and ``y`` through two different outgoing transitions."""
        for node in (x, y):
            if node not in self._index:
                raise UnknownNodeError(f"unknown node {node!r}")
        reach = {}

        def closure(t):
            if t not in reach:
                reach[t] = self.forward_closure(t)
            return reach[t]

        for p in self.places:
            if p == x or p == y:
                continue
            outs = self._post[p]
            if len(outs) < 2:
                continue
            from_x = [t for t in outs if x in closure(t)]
            if not from_x:
                continue
            from_y = [t for t in outs if y in closure(t)]
            if any(t1 != t2 for t1 in from_x for t2 in from_y):
                return True
        return False

    def sccs(self):
        """Place sets of the non-trivial strongly connected components plus one
        final set holding every place outside of them (omitted when empty)."""
        groups = []
        covered = set()
        for comp in strongly_connected_components(self.places + self.transitions, self._post.__getitem__):
            nontrivial = len(comp) > 1 or any(v in self._post[v] for v in comp)
            places = frozenset(v for v in comp if v in self._place_set)
            if nontrivial and places:
                groups.append(places)
                covered |= places
        groups.sort(key=lambda g: min(self._index[p] for p in g))
        rest = frozenset(p for p in self.places if p not in covered)
        if rest:
            groups.append(rest)
        return groups

    def to_dot(self, name="net", bad=(), environment=None, labels=None):
        """Graphviz rendering: places as circles, transitions as boxes, bad
        places double-circled, environment places white and system places grey."""
        return to_dot(self, name=name, bad=bad, environment=environment, labels=labels)


def strongly_connected_components(vertices, successors):
    """Iterative Tarjan; yields components as sets in reverse topological order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    counter = 0
    for root in vertices:
        if root in index:
            continue
        work = [(root, iter(successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                yield comp


def _quote(s):
    return '"{}"'.format(s.replace('"', r'\"'))


def to_dot(net, name="net", bad=(), environment=None, labels=None):
    bad = set(bad)
    labels = labels or {}
    lines = [f"digraph {_quote(name)} {{", "  rankdir=TB;"]
    for p in net.places:
        shape = "doublecircle" if p in bad else "circle"
        fill = "white" if environment is None or p in environment else "grey80"
        label = p if p not in labels else f"{p}\\n[{labels[p]}]"
        if p in net.initial:
            label = "*\\n" + label
        lines.append(f"  {_quote(p)} [shape={shape} style=filled fillcolor={fill} "
                     f"label={_quote(label)}];")
    for t in net.transitions:
        label = t if t not in labels else f"{t}\\n[{labels[t]}]"
        lines.append(f"  {_quote(t)} [shape=box label={_quote(label)}];")
    for src, dst in net.flow:
        lines.append(f"  {_quote(src)} -> {_quote(dst)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
