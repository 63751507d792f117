"""Finite automata on bi-infinite words and the exact decision procedures.

An automaton here accepts the label sequences of bi-infinite edge paths that
visit an initial-recurrence state infinitely often to the left and a
final-recurrence state infinitely often to the right.  Eventually periodic
words have decidable membership, emptiness reduces to cycle reachability,
and the class is closed under products and coordinate projections, which is
enough to decide exactly whether a block rule's sweeps realize a given
cellular automaton: no complementation is ever needed because the "differs
somewhere from the image" relation is itself directly recognizable.

Labels are plain integers; a k-track label packs k symbols below q in one
integer, big-endian, so a pair (y, z) reads as y * q + z.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

import networkx as nx

from .core import EpConfig, ResourceCapError, all_words, word_index, \
    word_of_index
from .ca import LocalRule, minimize_neighborhood
from .blockrule import BlockRule


def encode_label(symbols: tuple[int, ...], q: int) -> int:
    return word_index(symbols, q)


def decode_label(label: int, q: int, arity: int) -> tuple[int, ...]:
    return word_of_index(label, arity, q)


@dataclass(frozen=True)
class ZAutomaton:
    """States, labeled edges, and the two recurrence sets."""

    q: int
    arity: int
    states: frozenset
    edges: frozenset
    initial: frozenset
    final: frozenset

    @property
    def label_count(self) -> int:
        return self.q ** self.arity

    def successors(self) -> dict:
        # sorted so path and witness extraction are reproducible across runs
        succ: dict = {s: [] for s in self.states}
        for src, label, dst in sorted(self.edges, key=repr):
            succ[src].append((label, dst))
        return succ

    def to_json(self) -> dict:
        order = sorted(self.states, key=repr)
        index = {s: k for k, s in enumerate(order)}
        return {"alphabet": self.q, "arity": self.arity,
                "states": len(order),
                "edges": sorted((index[s], l, index[t])
                                for s, l, t in self.edges),
                "I": sorted(index[s] for s in self.initial),
                "F": sorted(index[s] for s in self.final)}


def _edge_graph(A: ZAutomaton) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(A.states)
    g.add_edges_from((s, t) for s, _, t in A.edges)
    return g


def _cyclic_sccs(graph: nx.DiGraph, marked) -> list[set]:
    """Strongly connected components that contain a cycle and a marked node."""
    out = []
    marked = set(marked)
    for comp in nx.strongly_connected_components(graph):
        if not comp & marked:
            continue
        first = next(iter(comp))
        if len(comp) > 1 or graph.has_edge(first, first):
            out.append(comp)
    return out


def _reach_forward(graph: nx.DiGraph, seeds) -> set:
    seen = set(seeds)
    frontier = list(seen)
    while frontier:
        node = frontier.pop()
        for nxt in graph[node]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return seen


def _reach_backward(graph: nx.DiGraph, seeds) -> set:
    seen = set(seeds)
    frontier = list(seen)
    while frontier:
        node = frontier.pop()
        for prv in graph.predecessors(node):
            if prv not in seen:
                seen.add(prv)
                frontier.append(prv)
    return seen


# ---------------------------------------------------------------------------
# Membership, emptiness, trimming

def member(A: ZAutomaton, x: EpConfig) -> bool:
    """Is the eventually periodic word x accepted?

    A left lasso over the left period must reach the center run, which must
    reach a right lasso over the right period; the lassos carry the
    recurrence obligations.
    """
    if x.q != A.label_count:
        raise ValueError("word alphabet does not match the label space")
    succ = A.successors()
    P = len(x.left_period)
    left = nx.DiGraph()
    for s in A.states:
        for t in range(P):
            for label, d in succ[s]:
                if label == x.left_period[t]:
                    left.add_edge((s, t), (d, (t + 1) % P))
    seeds = _cyclic_sccs(left, ((s, t) for s in A.initial for t in range(P)))
    good_left = _reach_forward(left, set().union(*seeds)) if seeds else set()
    # phase t at boundary p means (p - boundary anchor) = t mod period
    states = {s for s in A.states if (s, 0) in good_left}
    for p in range(x.center_start, x.center_end):
        symbol = x.cell(p)
        states = {d for s in states for label, d in succ[s] if label == symbol}
        if not states:
            return False
    R = len(x.right_period)
    right = nx.DiGraph()
    for s in A.states:
        for t in range(R):
            for label, d in succ[s]:
                if label == x.right_period[t]:
                    right.add_edge((s, t), (d, (t + 1) % R))
    sinks = _cyclic_sccs(right, ((s, t) for s in A.final for t in range(R)))
    good_right = _reach_backward(right, set().union(*sinks)) if sinks else set()
    return any((s, 0) in good_right for s in states)


def is_empty(A: ZAutomaton) -> bool:
    """No bi-infinite path satisfies both recurrence obligations."""
    graph = _edge_graph(A)
    left = _cyclic_sccs(graph, A.initial)
    right = _cyclic_sccs(graph, A.final)
    if not left or not right:
        return True
    targets = set().union(*right)
    return not (_reach_forward(graph, set().union(*left)) & targets)


def _labeled_path(A: ZAutomaton, sources: set, targets: set):
    """Shortest edge-label word from any source to any target state."""
    succ = A.successors()
    ordered = sorted(sources, key=repr)
    parents = {s: None for s in ordered}
    frontier = ordered
    while frontier:
        nxt_frontier = []
        for s in frontier:
            if s in targets:
                labels = []
                node = s
                while parents[node] is not None:
                    prev, label = parents[node]
                    labels.append(label)
                    node = prev
                return node, list(reversed(labels)), s
            for label, d in succ[s]:
                if d not in parents:
                    parents[d] = (s, label)
                    nxt_frontier.append(d)
        frontier = nxt_frontier
    return None


def _cycle_through(A: ZAutomaton, state) -> list[int]:
    """Labels of a shortest cycle through the given state."""
    succ = A.successors()
    parents = {state: None}
    frontier = [state]
    while frontier:
        nxt_frontier = []
        for s in frontier:
            for label, d in succ[s]:
                if d == state:
                    labels = [label]
                    node = s
                    while parents[node] is not None:
                        prev, lab = parents[node]
                        labels.append(lab)
                        node = prev
                    return list(reversed(labels))
                if d not in parents:
                    parents[d] = (s, label)
                    nxt_frontier.append(d)
        frontier = nxt_frontier
    raise ValueError("state lies on no cycle")


def nonempty_witness(A: ZAutomaton) -> EpConfig | None:
    """An accepted eventually periodic word, if any exists.

    Left lasso labels become the left period, the connecting path the
    center, the right lasso the right period.
    """
    graph = _edge_graph(A)
    left = _cyclic_sccs(graph, A.initial)
    right = _cyclic_sccs(graph, A.final)
    if not left or not right:
        return None
    reach = _reach_forward(graph, set().union(*left))
    if not (set().union(*right) & reach):
        return None
    # aim for final states so the right lasso is guaranteed to carry one
    targets = {s for comp in right for s in comp if s in A.final}
    i_states = {s for comp in left for s in comp if s in A.initial}
    found = _labeled_path(A, i_states, targets)
    if found is None:
        return None
    i0, center, f0 = found
    lp = _cycle_through(A, i0)
    rp = _cycle_through(A, f0)
    return EpConfig(A.label_count, tuple(lp), tuple(center), 0,
                    tuple(rp)).normalize()


def trim(A: ZAutomaton) -> ZAutomaton:
    """Drop states on no accepting bi-infinite path; language unchanged."""
    graph = _edge_graph(A)
    left = _cyclic_sccs(graph, A.initial)
    right = _cyclic_sccs(graph, A.final)
    if not left or not right:
        keep: set = set()
    else:
        keep = (_reach_forward(graph, set().union(*left)) &
                _reach_backward(graph, set().union(*right)))
    return ZAutomaton(A.q, A.arity, frozenset(keep),
                      frozenset((s, l, t) for s, l, t in A.edges
                                if s in keep and t in keep),
                      A.initial & keep, A.final & keep)


# ---------------------------------------------------------------------------
# Products and projections

def intersect(A: ZAutomaton, B: ZAutomaton) -> ZAutomaton:
    """Automaton for L(A) & L(B).

    Each side owes two recurrence visits; one alternation flag per side
    reduces them to one: the flag advances when the currently watched
    component recurs, and the product recurrence set is "flag at rest and
    the first component recurring".
    """
    if A.q != B.q or A.arity != B.arity:
        raise ValueError("alphabet mismatch")
    states = set()
    edges = set()
    by_label: dict = {}
    for sb, label, tb in B.edges:
        by_label.setdefault(label, []).append((sb, tb))
    for sa, label, ta in A.edges:
        for sb, tb in by_label.get(label, ()):
            for lflag_t in (0, 1):
                if lflag_t == 0:
                    lflag_s = 1 if ta in A.initial else 0
                else:
                    lflag_s = 0 if tb in B.initial else 1
                for rflag_s in (0, 1):
                    if rflag_s == 0:
                        rflag_t = 1 if sa in A.final else 0
                    else:
                        rflag_t = 0 if sb in B.final else 1
                    src = (sa, sb, lflag_s, rflag_s)
                    dst = (ta, tb, lflag_t, rflag_t)
                    states.add(src)
                    states.add(dst)
                    edges.add((src, label, dst))
    initial = frozenset(s for s in states if s[2] == 0 and s[0] in A.initial)
    final = frozenset(s for s in states if s[3] == 0 and s[0] in A.final)
    return ZAutomaton(A.q, A.arity, frozenset(states), frozenset(edges),
                      initial, final)


def project(A: ZAutomaton, coordinate: int) -> ZAutomaton:
    """Keep one track of a product-alphabet automaton."""
    if A.arity < 2:
        raise ValueError("projection needs a product alphabet")
    if not 0 <= coordinate < A.arity:
        raise ValueError("coordinate out of range")
    edges = frozenset(
        (s, decode_label(label, A.q, A.arity)[coordinate], t)
        for s, label, t in A.edges)
    return ZAutomaton(A.q, 1, A.states, edges, A.initial, A.final)


def _generalized_is_empty(graph: nx.DiGraph, left_sets, right_sets) -> bool:
    """Emptiness with several recurrence sets per side.

    A single cycle can serve all sets of one side iff some strongly
    connected component with an edge meets every one of them.
    """
    comp_of = {}
    comps = []
    for k, comp in enumerate(nx.strongly_connected_components(graph)):
        comps.append(comp)
        for node in comp:
            comp_of[node] = k
    def cyclic(comp):
        first = next(iter(comp))
        return len(comp) > 1 or graph.has_edge(first, first)
    lefts = [k for k, comp in enumerate(comps)
             if cyclic(comp) and all(comp & s for s in left_sets)]
    rights = {k for k, comp in enumerate(comps)
              if cyclic(comp) and all(comp & s for s in right_sets)}
    if not lefts or not rights:
        return True
    cond = nx.condensation(graph, scc=comps)
    frontier = list(lefts)
    seen = set(lefts)
    while frontier:
        k = frontier.pop()
        if k in rights:
            return False
        for nxt in cond[k]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return not (seen & rights)


# ---------------------------------------------------------------------------
# Relation automata

def slider_relation_automaton(chi: BlockRule,
                              max_states: int | None = None) -> ZAutomaton:
    """Automaton for the pairs (y, z) the block rule's two sweeps represent.

    Reading left to right, the run simulates the backward inverse sweep with
    inverted edges while buffering its cell emissions, crosses a bridge of
    m-1 positions where the guessed free cells are handed over, then
    simulates the forward sweep with the output buffer delaying the
    comparison by m-1 cells.  The left states and right states carry the
    recurrence obligations, so accepted paths cross the bridge exactly once;
    shift invariance of the relation makes the crossing position immaterial.
    """
    if not chi.is_bijective():
        raise ValueError("slider relations need a bijective block rule")
    q, m = chi.q, chi.block_length
    predicted = 2 if m == 1 else m * q ** (2 * m - 2)
    if max_states is not None and predicted > max_states:
        raise ResourceCapError(
            f"slider automaton needs about {predicted} states, cap is "
            f"{max_states}")
    inv = chi.inverse()
    states = set()
    edges = set()

    def lab(y, z):
        return y * q + z

    if m == 1:
        L = ("L", (), ())
        R = ("R", (), ())
        states.update((L, R))
        for y in range(q):
            z = chi((y,))[0]
            edges.add((L, lab(y, z), L))
            edges.add((L, lab(y, z), R))
            edges.add((R, lab(y, z), R))
        return ZAutomaton(q, 2, frozenset(states), frozenset(edges),
                          frozenset([L]), frozenset([R]))

    for vt in all_words(m - 1, q):
        for z in range(q):
            img = inv((z,) + vt)
            vs, em = img[:m - 1], img[m - 1]
            for y0 in range(q):
                for ytail in all_words(m - 2, q):
                    src = ("L", vs, (y0,) + ytail)
                    dst = ("L", vt, ytail + (em,))
                    states.update((src, dst))
                    edges.add((src, lab(y0, z), dst))
    # bridge: hand the guessed window across while draining the y-buffer
    for v in all_words(m - 1, q):
        for ybuf in all_words(m - 1, q):
            src = ("L", v, ybuf)
            for z in range(q):
                if m == 2:
                    dst = ("R", v, (z,))
                else:
                    dst = ("B", 1, v, ybuf[1:], (z,))
                states.update((src, dst))
                edges.add((src, lab(ybuf[0], z), dst))
    for t in range(1, m - 1):
        for v in all_words(m - 1, q):
            for yrest in all_words(m - 1 - t, q):
                for zacc in all_words(t, q):
                    src = ("B", t, v, yrest, zacc)
                    for z in range(q):
                        if t + 1 < m - 1:
                            dst = ("B", t + 1, v, yrest[1:], zacc + (z,))
                        else:
                            dst = ("R", v, zacc + (z,))
                        states.update((src, dst))
                        edges.add((src, lab(yrest[0], z), dst))
    for c in all_words(m - 1, q):
        for zpend in all_words(m - 1, q):
            src = ("R", c, zpend)
            for y in range(q):
                img = chi(c + (y,))
                if img[0] != zpend[0]:
                    continue
                for z in range(q):
                    dst = ("R", img[1:], zpend[1:] + (z,))
                    states.update((src, dst))
                    edges.add((src, lab(y, z), dst))
    initial = frozenset(s for s in states if s[0] == "L")
    final = frozenset(s for s in states if s[0] == "R")
    return ZAutomaton(q, 2, frozenset(states), frozenset(edges), initial,
                      final)


def sweeper_relation_automaton(chi: BlockRule,
                               max_states: int | None = None) -> ZAutomaton:
    """Automaton for the pairs (y, z) with z an accumulation point of the
    sweeps of y anchored further and further left.

    The run guesses the bi-infinite chain of sweep windows producing z and
    certifies it with one probe at a time: a probe collects m raw input
    cells from some anchor position, then sweeps along until it coincides
    with the chain, which flags the state.  Flags recurring to the left
    mean arbitrarily far anchors reach the chain, which is exactly
    membership; no obligation falls on the right side.
    """
    q, m = chi.q, chi.block_length
    predicted = 1 if m == 1 else \
        2 * q ** (2 * m - 2) * (1 + sum(q ** t for t in range(1, m)))
    if max_states is not None and predicted > max_states:
        raise ResourceCapError(
            f"sweeper automaton needs about {predicted} states, cap is "
            f"{max_states}")
    states = set()
    edges = set()

    def lab(y, z):
        return y * q + z

    if m == 1:
        S = ("S",)
        for y in range(q):
            edges.add((S, lab(y, chi((y,))[0]), S))
        return ZAutomaton(q, 2, frozenset([S]), frozenset(edges),
                          frozenset([S]), frozenset([S]))

    idle = ("idle",)
    partials = [idle] + [w for t in range(1, m) for w in all_words(t, q)]
    for mm in all_words(m - 1, q):
        for zp in all_words(m - 1, q):
            for u in partials:
                for flag in (False, True):
                    src = ("S", mm, zp, u, flag)
                    states.add(src)
                    for y in range(q):
                        img = chi(mm + (y,))
                        if img[0] != zp[0]:
                            continue
                        m2 = img[1:]
                        for z in range(q):
                            zp2 = zp[1:] + (z,)
                            moves = []
                            if u == idle:
                                moves.append((idle, False))
                                moves.append(((y,), False))
                            elif len(u) < m - 1:
                                moves.append((u + (y,), False))
                            elif u == mm:
                                moves.append((idle, True))
                            else:
                                moves.append((chi(u + (y,))[1:], False))
                            for u2, flag2 in moves:
                                dst = ("S", m2, zp2, u2, flag2)
                                states.add(dst)
                                edges.add((src, lab(y, z), dst))
    initial = frozenset(s for s in states if s[4])
    final = frozenset(states)
    return ZAutomaton(q, 2, frozenset(states), frozenset(edges), initial,
                      final)


def graph_mismatch_automaton(f: LocalRule) -> ZAutomaton:
    """Automaton for the pairs (y, z) with z differing from f(y) somewhere.

    The run tracks enough recent input to evaluate one local window, guesses
    the differing position, and falls into an absorbing state; when the rule
    looks ahead the comparison value is carried in a countdown instead.
    """
    g = minimize_neighborhood(f)
    q, w = g.q, g.width
    lag = g.anchor + g.width - 1
    after = ("after",)
    states = {after}
    edges = set()

    def lab(y, z):
        return y * q + z

    all_labels = [lab(y, z) for y in range(q) for z in range(q)]
    for label in all_labels:
        edges.add((after, label, after))
    zlen = max(lag, 0)
    for ybuf in all_words(w - 1, q):
        for zbuf in all_words(zlen, q):
            src = ("pre", ybuf, zbuf)
            states.add(src)
            for y in range(q):
                for z in range(q):
                    dst = ("pre", (ybuf + (y,))[1:] if w > 1 else (),
                           (zbuf + (z,))[1:] if zlen else ())
                    states.add(dst)
                    edges.add((src, lab(y, z), dst))
                    value = g(ybuf + (y,))
                    compare = zbuf[0] if lag > 0 else (z if lag == 0 else None)
                    if compare is not None:
                        if value != compare:
                            edges.add((src, lab(y, z), after))
                    else:
                        # rule looks left of the output cell: count down
                        steps = -lag
                        dst2 = ("count", value, steps) if steps > 1 \
                            else ("cmp", value)
                        states.add(dst2)
                        edges.add((src, lab(y, z), dst2))
    if lag < 0:
        for value in range(q):
            for steps in range(2, -lag + 1):
                src = ("count", value, steps)
                states.add(src)
                dst = ("count", value, steps - 1) if steps > 2 \
                    else ("cmp", value)
                states.add(dst)
                for label in all_labels:
                    edges.add((src, label, dst))
            src = ("cmp", value)
            states.add(src)
            for y in range(q):
                for z in range(q):
                    if z != value:
                        edges.add((src, lab(y, z), after))
    initial = frozenset(s for s in states if s[0] == "pre")
    return ZAutomaton(q, 2, frozenset(states), frozenset(edges), initial,
                      frozenset([after]))


def _differs_in_last_two(q: int) -> ZAutomaton:
    """Triples (y, z, z') with z unequal to z' at some position."""
    pre = ("pre",)
    after = ("after",)
    edges = set()
    for y in range(q):
        for z in range(q):
            for z2 in range(q):
                label = (y * q + z) * q + z2
                edges.add((pre, label, pre))
                edges.add((after, label, after))
                if z != z2:
                    edges.add((pre, label, after))
    return ZAutomaton(q, 3, frozenset([pre, after]), frozenset(edges),
                      frozenset([pre]), frozenset([after]))


def _fiber_square(A: ZAutomaton):
    """Edge graph of pairs of runs of A sharing the first track.

    Returns the graph over (state, state, diff-phase) nodes together with
    the recurrence sets of both run copies, labels expanded to triples.
    """
    if A.arity != 2:
        raise ValueError("fiber product needs a two-track automaton")
    q = A.q
    by_y: dict = {}
    for s, label, t in A.edges:
        y, z = decode_label(label, q, 2)
        by_y.setdefault(y, []).append((s, z, t))
    diff = _differs_in_last_two(q)
    dsucc: dict = {}
    for s, label, t in diff.edges:
        dsucc.setdefault((s, label), []).append(t)
    graph = nx.DiGraph()
    for y, group in by_y.items():
        for (s1, z1, t1) in group:
            for (s2, z2, t2) in group:
                label = (y * q + z1) * q + z2
                for ds in (("pre",), ("after",)):
                    for dt in dsucc.get((ds, label), ()):
                        graph.add_edge((s1, s2, ds), (t1, t2, dt))
    lefts = [{n for n in graph if n[0] in A.initial},
             {n for n in graph if n[1] in A.initial},
             {n for n in graph if n[2] in diff.initial}]
    rights = [{n for n in graph if n[0] in A.final},
              {n for n in graph if n[1] in A.final},
              {n for n in graph if n[2] in diff.final}]
    return graph, lefts, rights


def is_function(A: ZAutomaton) -> bool:
    """Does every accepted first track carry exactly one second track?

    Two runs over a shared first track whose second tracks differ somewhere
    witness non-functionality; the check is emptiness of that three-track
    product, built directly instead of via complementation.
    """
    graph, lefts, rights = _fiber_square(A)
    return _generalized_is_empty(graph, lefts, rights)


def _relation_product_graph(A: ZAutomaton, B: ZAutomaton):
    if A.q != B.q or A.arity != B.arity:
        raise ValueError("alphabet mismatch")
    by_label: dict = {}
    for s, label, t in B.edges:
        by_label.setdefault(label, []).append((s, t))
    graph = nx.DiGraph()
    for sa, label, ta in A.edges:
        for sb, tb in by_label.get(label, ()):
            graph.add_edge((sa, sb), (ta, tb))
    lefts = [{n for n in graph if n[0] in A.initial},
             {n for n in graph if n[1] in B.initial}]
    rights = [{n for n in graph if n[0] in A.final},
              {n for n in graph if n[1] in B.final}]
    return graph, lefts, rights


def is_slider_rule_for(chi: BlockRule, f: LocalRule,
                       max_states: int | None = None) -> bool:
    """Is the relation represented by the block rule exactly the graph of f?

    For bijective rules the relation is total on inputs and maps each input
    to the inputs' full configuration space image, so containment in the
    graph of f already forces equality: it suffices that no represented
    pair disagrees with f anywhere.
    """
    if chi.q != f.q:
        raise ValueError("alphabet mismatch")
    if not chi.is_bijective():
        raise ValueError("slider relations need a bijective block rule")
    A = slider_relation_automaton(chi, max_states)
    B = graph_mismatch_automaton(f)
    graph, lefts, rights = _relation_product_graph(A, B)
    return _generalized_is_empty(graph, lefts, rights)


def sweeper_defines_function(chi: BlockRule) -> bool:
    """Do the leftward-anchored sweeps converge on every input?"""
    return is_function(trim(sweeper_relation_automaton(chi)))
