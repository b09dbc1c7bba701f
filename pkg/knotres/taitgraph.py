"""Oriented, weighted Tait graph on the unshaded faces and its Laplacian."""

import json
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass

import networkx as nx
from sympy import Rational, zeros

from knotres.diagram import UNSHADED, checkerboard, validate
from knotres.errors import IndexOutOfRange, MalformedSyntax, NotAccepted, UnbalancedGraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TaitGraph:
    n: int
    edges: tuple
    vertex_labels: tuple = ()

    @property
    def weights(self):
        return tuple(w for _, _, w, _ in self.edges)

    @property
    def omega(self):
        """The common edge weight, or None when weights differ."""
        weights = set(self.weights)
        return weights.pop() if len(weights) == 1 else None

    def degree_imbalance(self):
        """vertex -> weighted out-degree minus weighted in-degree, for unbalanced vertices."""
        balance = defaultdict(lambda: Rational(0))
        for tail, head, w, _ in self.edges:
            balance[tail] += w
            balance[head] -= w
        return {v: b for v, b in sorted(balance.items()) if b != 0}

    @property
    def is_balanced(self):
        return not self.degree_imbalance()


def tait_graph(d):
    """One edge per crossing, from the face at its in-in corner to the face at its out-out corner."""
    report = validate(d)
    if not report.accepted:
        failures = report.failures()
        raise NotAccepted(
            f"diagram is not accepted: {', '.join(failures)}", code=failures[0], failures=failures
        )

    colors = checkerboard(d)
    unshaded = [i for i in range(len(d.face_cycles)) if colors[i] == UNSHADED]
    vertex_of = {face: v for v, face in enumerate(unshaded)}

    edges = []
    for c in d.crossings:
        corners = {}
        for t in range(4):
            flags = (c.is_incoming(t), c.is_incoming((t + 1) % 4))
            if flags[0] == flags[1]:
                corners[flags[0]] = vertex_of[d.face_of_corner[(c.id, t)]]
        edges.append((corners[True], corners[False], Rational(-c.sign), c.id))

    g = TaitGraph(len(unshaded), tuple(edges), tuple(unshaded))
    logger.info(f"Tait graph with {g.n} vertices and {len(g.edges)} edges")
    return g


def laplacian(g):
    """L[i][i] = weighted out-degree of i; L[i][j] = -(total weight of edges i -> j)."""
    L = zeros(g.n, g.n)
    for tail, head, w, _ in g.edges:
        L[tail, tail] += w
        L[tail, head] -= w
    return L


def from_edge_list(spec, strict=False):
    """Build a TaitGraph from `{n, edges: [[tail, head, weight], ...], order?}` (dict or JSON text)."""
    if isinstance(spec, str):
        try:
            spec = json.loads(spec)
        except json.JSONDecodeError as e:
            raise MalformedSyntax(f"invalid edge-list JSON: {e}")
    if not isinstance(spec, dict) or "n" not in spec or "edges" not in spec:
        raise MalformedSyntax("edge list needs 'n' and 'edges'")

    n = int(spec["n"])
    if n < 1:
        raise IndexOutOfRange(f"vertex count must be positive, got {n}")

    edges = []
    for k, entry in enumerate(spec["edges"]):
        if len(entry) not in (3, 4):
            raise MalformedSyntax(f"edge {k} must be [tail, head, weight]")
        tail, head = int(entry[0]), int(entry[1])
        for v in (tail, head):
            if not 0 <= v < n:
                raise IndexOutOfRange(f"edge {k} uses vertex {v}, outside 0..{n - 1}", edge=k)
        if tail == head:
            raise MalformedSyntax(f"edge {k} is a self-loop at vertex {tail}")
        crossing = int(entry[3]) if len(entry) == 4 else k
        edges.append((tail, head, Rational(entry[2]), crossing))

    order = tuple(spec.get("order") or range(n))
    if len(order) != n:
        raise MalformedSyntax(f"order lists {len(order)} faces for {n} vertices")

    g = TaitGraph(n, tuple(edges), order)
    imbalance = g.degree_imbalance()
    if imbalance:
        if strict:
            raise UnbalancedGraph(
                f"in- and out-degree differ at vertices {sorted(imbalance)}",
                vertices=sorted(imbalance),
            )
        logger.warning(f"Edge list is unbalanced at vertices {sorted(imbalance)}")
    return g


def _plain(w):
    w = Rational(w)
    return int(w) if w.q == 1 else str(w)


def to_edge_list(g):
    """Export in the edge-list schema; from_edge_list(to_edge_list(g)) rebuilds g."""
    return {
        "n": g.n,
        "edges": [[tail, head, _plain(w)] for tail, head, w, _ in g.edges],
        "order": list(g.vertex_labels),
    }


def to_networkx(g):
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(g.n))
    for tail, head, w, crossing in g.edges:
        graph.add_edge(tail, head, weight=w, crossing=crossing)
    return graph


def _laplacian_digraph(g):
    # Collapse parallel edges: the Laplacian only sees total weight per ordered pair
    totals = Counter()
    for tail, head, w, _ in g.edges:
        totals[(tail, head)] += w
    graph = nx.DiGraph()
    L = laplacian(g)
    graph.add_nodes_from((v, {"diag": L[v, v]}) for v in range(g.n))
    graph.add_edges_from((t, h, {"weight": w}) for (t, h), w in totals.items() if w != 0)
    return graph


def isomorphism(g1, g2):
    """A vertex map v1 -> v2 with L(g2) relabeled equal to L(g1), or None."""
    if g1.n != g2.n:
        return None
    matcher = nx.algorithms.isomorphism.DiGraphMatcher(
        _laplacian_digraph(g1),
        _laplacian_digraph(g2),
        node_match=lambda a, b: a["diag"] == b["diag"],
        edge_match=lambda a, b: a["weight"] == b["weight"],
    )
    if matcher.is_isomorphic():
        return dict(matcher.mapping)
    return None


def isomorphic(g1, g2):
    """Laplacians equal up to a simultaneous vertex relabeling."""
    return isomorphism(g1, g2) is not None
