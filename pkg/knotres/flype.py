"""Flype detection, the flype rewrite on PD codes, and the orbit invariance harness."""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from knotres import exactlinalg
from knotres.diagram import canonical_form, from_codes, underlying_graph
from knotres.errors import KnotresError, NotAdmissible
from knotres.invariants import alexander, edge_resistances, fp, resistance_matrix
from knotres.taitgraph import laplacian, tait_graph
from knotres.utils.data_processor import format_polynomial, format_rational

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10000


@dataclass(frozen=True)
class TangleRegion:
    crossings: tuple
    boundary_arcs: tuple
    pivot: int

    def to_dict(self):
        return {
            "crossings": list(self.crossings),
            "boundary_arcs": list(self.boundary_arcs),
            "pivot": self.pivot,
        }


def _boundary_arcs(d, region):
    arcs = []
    for label, ((x, _), (y, _)) in d.arc_ends.items():
        if (x in region) != (y in region):
            arcs.append(label)
    return sorted(arcs)


def _pivot_slots(d, region, pivot):
    """Slot k when the pivot meets the region through exactly its slots k and k+1, else None."""
    into = [
        s for s in range(4)
        if d.other_end(pivot, s)[0] in region
    ]
    if len(into) != 2:
        return None
    a, b = into
    if (a + 1) % 4 == b:
        return a
    if (b + 1) % 4 == a:
        return b
    return None


def find_flypes(d):
    """Every (tangle, pivot) pair: a connected 4-arc tangle whose complement is connected,
    with a pivot crossing outside it that touches it through two adjacent slots."""
    n = d.crossing_count
    graph = underlying_graph(d)
    found = []
    for size in range(1, n - 1):
        for region in combinations(range(n), size):
            members = set(region)
            boundary = _boundary_arcs(d, members)
            if len(boundary) != 4:
                continue
            rest = [x for x in range(n) if x not in members]
            if not nx.is_connected(graph.subgraph(region)) or not nx.is_connected(graph.subgraph(rest)):
                continue
            for pivot in rest:
                if _pivot_slots(d, members, pivot) is not None:
                    found.append(TangleRegion(tuple(region), tuple(boundary), pivot))
    logger.debug(f"Found {len(found)} flypes in a {n}-crossing diagram")
    return found


def make_tangle(d, crossings, pivot):
    """TangleRegion for the given crossing ids and pivot; NotAdmissible when it is no flype of d."""
    region = tuple(sorted(set(int(x) for x in crossings)))
    pivot = int(pivot)
    for x in region + (pivot,):
        if not 0 <= x < d.crossing_count:
            raise NotAdmissible(f"crossing {x} does not exist in a {d.crossing_count}-crossing diagram")
    tangle = TangleRegion(region, tuple(_boundary_arcs(d, set(region))), pivot)
    if tangle not in find_flypes(d):
        raise NotAdmissible(
            f"crossings {list(region)} with pivot {pivot} are not a flype of this diagram",
            crossings=list(region),
            pivot=pivot,
        )
    return tangle


def _find_alpha(d, members, pivot, k, outer):
    """Outer arc reached first when walking the face at the pivot's corner k+1 away from the tangle."""
    start = (pivot, (k + 1) % 4)
    corner = start
    while True:
        x, t = corner
        leave = (t + 1) % 4
        label = d.crossings[x].slots[leave]
        corner = d.other_end(x, leave)
        if corner[0] in members and label in outer:
            return label
        if corner == start:
            raise NotAdmissible(f"face at pivot {pivot} never reaches the tangle's outer arcs")


def _end_outside(d, label, members):
    first, second = d.arc_ends[label]
    return second if first[0] in members else first


def _end_inside(d, label, members):
    first, second = d.arc_ends[label]
    return first if first[0] in members else second


def apply_flype(d, t):
    """Remove the pivot, turn the tangle over, and put the pivot back on the tangle's far side."""
    if t not in find_flypes(d):
        raise NotAdmissible(
            f"crossings {list(t.crossings)} with pivot {t.pivot} are not a flype of this diagram",
            crossings=list(t.crossings),
            pivot=t.pivot,
        )
    members = set(t.crossings)
    pivot = d.crossings[t.pivot]
    k = _pivot_slots(d, members, t.pivot)
    p, q, u, v = (pivot.slots[(k + i) % 4] for i in range(4))
    outer = set(t.boundary_arcs) - {p, q}
    alpha = _find_alpha(d, members, t.pivot, k, outer)
    (beta,) = outer - {alpha}

    codes = [list(c.slots) for c in d.crossings]
    over_in = [c.over_in for c in d.crossings]

    # The pivot's strands close up: p continues as u, q continues as v
    for label, merged in ((p, u), (q, v)):
        x, s = _end_inside(d, label, members)
        codes[x][s] = merged
    # The freed labels become the outer halves of alpha and beta
    for label, freed in ((alpha, q), (beta, p)):
        x, s = _end_outside(d, label, members)
        codes[x][s] = freed

    # Turning the tangle over reverses its cyclic orders and swaps over with under
    for x in t.crossings:
        a, b, c, e = codes[x]
        codes[x] = [e, c, b, a] if d.crossings[x].sign > 0 else [b, a, e, c]

    ring = [beta, alpha, p, q]
    beta_in = 2 if d.heads[beta][0] in members else 0
    alpha_in = 3 if d.heads[alpha][0] in members else 1
    for under_in, other_in in ((beta_in, alpha_in), (alpha_in, beta_in)):
        slot = (other_in - under_in) % 4
        if (1 if slot == 3 else -1) == pivot.sign:
            codes[t.pivot] = ring[under_in:] + ring[:under_in]
            over_in[t.pivot] = slot
            break

    flyped = from_codes(codes, over_in=over_in)
    logger.info(f"Flyped crossings {list(t.crossings)} around pivot {t.pivot}")
    return flyped


@dataclass(frozen=True)
class HarnessReport:
    orbit_size: int
    fp_values: tuple
    char_polys: tuple
    alexander: tuple
    budget_exhausted: bool
    depth: int
    total_resistances: tuple = ()
    red_flags: tuple = field(default_factory=tuple)

    @property
    def fp_invariant(self):
        return len(self.fp_values) == 1

    @property
    def alexander_invariant(self):
        return len(self.alexander) == 1

    def to_dict(self):
        return {
            "orbit_size": self.orbit_size,
            "depth": self.depth,
            "fp_values": [format_rational(v) for v in self.fp_values],
            "char_polys": [format_polynomial(c) for c in self.char_polys],
            "alexander": [format_polynomial(a) for a in self.alexander],
            "total_resistances": [format_rational(r) for r in self.total_resistances],
            "budget_exhausted": self.budget_exhausted,
            "red_flags": list(self.red_flags),
        }


def _diagram_fp(diagram):
    return fp(laplacian(tait_graph(diagram)))


def verify_invariance(d, depth, budget=DEFAULT_BUDGET):
    """Breadth-first flype orbit of d up to `depth` moves, with the invariants of every diagram met."""
    if depth < 1:
        raise ValueError(f"depth must be at least 1, got {depth}")

    seen = {canonical_form(d): d}
    frontier = deque([(d, 0)])
    red_flags = []
    exhausted = False

    while frontier and not exhausted:
        diagram, level = frontier.popleft()
        if level >= depth:
            continue
        before = _diagram_fp(diagram)
        for tangle in find_flypes(diagram):
            try:
                flyped = apply_flype(diagram, tangle)
                after = _diagram_fp(flyped)
            except KnotresError as e:
                logger.warning(f"Flype {tangle.to_dict()} gave no accepted diagram: {e}")
                red_flags.append({**tangle.to_dict(), "error": e.code})
                continue
            if after != before:
                logger.warning(f"FP changed from {before} to {after} under flype {tangle.to_dict()}")
                red_flags.append({
                    **tangle.to_dict(),
                    "fp_before": format_rational(before),
                    "fp_after": format_rational(after),
                })
            key = canonical_form(flyped)
            if key in seen:
                continue
            if len(seen) >= budget:
                exhausted = True
                logger.warning(f"Orbit budget of {budget} diagrams exhausted")
                break
            seen[key] = flyped
            frontier.append((flyped, level + 1))

    fp_values = set()
    char_polys = set()
    alexanders = set()
    totals = []
    for key in sorted(seen):
        diagram = seen[key]
        g = tait_graph(diagram)
        L = laplacian(g)
        fp_values.add(fp(L))
        char_polys.add(exactlinalg.char_poly(L))
        alexanders.add(alexander(L, g.n - 1))
        totals.append(sum(edge_resistances(g, resistance_matrix(L))))

    report = HarnessReport(
        orbit_size=len(seen),
        fp_values=tuple(sorted(fp_values)),
        char_polys=tuple(sorted(char_polys, key=lambda c: c.coeffs)),
        alexander=tuple(sorted(alexanders, key=lambda a: a.coeffs)),
        budget_exhausted=exhausted,
        depth=depth,
        total_resistances=tuple(totals),
        red_flags=tuple(red_flags),
    )
    logger.info(f"Flype orbit of size {report.orbit_size}; FP values {report.fp_values}")
    return report
