"""Oriented link diagrams in PD notation: parsing, faces, shading, Seifert circles, validation.

Slot convention: each crossing lists its four arcs counterclockwise, starting at
the incoming under-strand. The under-strand runs slot 0 -> slot 2; the over-strand
enters at slot 3 on a positive crossing and at slot 1 on a negative one.

Corner t of a crossing is the angle between slots t and t+1.
"""

import json
import logging
import re
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from knotres.errors import (
    BadArcMultiplicity,
    DisconnectedDiagram,
    InconsistentOrientation,
    MalformedSyntax,
    NonPlanarRotation,
    NotBipartite,
)

logger = logging.getLogger(__name__)

SHADED = "shaded"
UNSHADED = "unshaded"

CROSSING_PATTERN = re.compile(
    r"X\s*[\(\[]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\)\]]"
)
ORIENT_PATTERN = re.compile(r"^\s*orient\s*:\s*(.*)$", re.IGNORECASE)
WRAPPER_PATTERN = re.compile(r"\bPD\b")
FILLER_CHARS = set(" \t\r\n,;[]()")


@dataclass(frozen=True)
class Crossing:
    id: int
    slots: tuple
    sign: int

    @property
    def over_in(self):
        """Slot where the over-strand enters."""
        return 3 if self.sign > 0 else 1

    def is_incoming(self, slot):
        return slot == 0 or slot == self.over_in

    def corner_arcs(self, corner):
        return self.slots[corner], self.slots[(corner + 1) % 4]

    def is_coherent(self, corner):
        """One strand enters and the other leaves through this corner."""
        return self.is_incoming(corner) != self.is_incoming((corner + 1) % 4)


@dataclass(frozen=True)
class Face:
    id: int
    boundary: tuple
    color: str
    arcs: tuple


@dataclass(frozen=True)
class SeifertCircle:
    id: int
    arcs: tuple
    corners: tuple


@dataclass(frozen=True)
class Diagram:
    crossings: tuple

    @property
    def crossing_count(self):
        return len(self.crossings)

    @property
    def arc_count(self):
        return 2 * len(self.crossings)

    @property
    def components(self):
        return len(self.strands)

    @property
    def codes(self):
        return tuple(c.slots for c in self.crossings)

    @property
    def signs(self):
        return tuple(c.sign for c in self.crossings)

    @cached_property
    def arc_ends(self):
        """arc label -> the two (crossing id, slot) positions it occupies."""
        ends = defaultdict(list)
        for c in self.crossings:
            for s, label in enumerate(c.slots):
                ends[label].append((c.id, s))
        return {label: tuple(pos) for label, pos in ends.items()}

    @cached_property
    def heads(self):
        """arc label -> (crossing id, slot) where the arc enters a crossing."""
        heads = {}
        for c in self.crossings:
            for s in (0, c.over_in):
                heads[c.slots[s]] = (c.id, s)
        return heads

    def other_end(self, crossing_id, slot):
        label = self.crossings[crossing_id].slots[slot]
        first, second = self.arc_ends[label]
        return second if first == (crossing_id, slot) else first

    def next_arc(self, label):
        """The arc that follows `label` along the link orientation."""
        x, s = self.heads[label]
        return self.crossings[x].slots[(s + 2) % 4]

    @cached_property
    def strands(self):
        """Link components as arc sequences in orientation order, ordered by smallest arc."""
        seen = set()
        strands = []
        for start in sorted(self.arc_ends):
            if start in seen:
                continue
            strand = []
            label = start
            while label not in seen:
                seen.add(label)
                strand.append(label)
                label = self.next_arc(label)
            strands.append(tuple(strand))
        return tuple(strands)

    @cached_property
    def face_cycles(self):
        """Faces as cycles of corners, traced with the face on the right of each arc."""
        visited = set()
        cycles = []
        for c in self.crossings:
            for t in range(4):
                if (c.id, t) in visited:
                    continue
                cycle = []
                corner = (c.id, t)
                while corner not in visited:
                    visited.add(corner)
                    cycle.append(corner)
                    x, s = corner
                    corner = self.other_end(x, (s + 1) % 4)
                cycles.append(tuple(cycle))

        def key(cycle):
            return (min(self._corner_arcs_of(cycle)), min(cycle))

        return tuple(sorted(cycles, key=key))

    def _corner_arcs_of(self, cycle):
        arcs = set()
        for x, t in cycle:
            arcs.update(self.crossings[x].corner_arcs(t))
        return arcs

    def face_arcs(self, face_index):
        return tuple(sorted(self._corner_arcs_of(self.face_cycles[face_index])))

    @cached_property
    def face_of_corner(self):
        return {corner: i for i, cycle in enumerate(self.face_cycles) for corner in cycle}

    @cached_property
    def face_colors(self):
        return _checkerboard(self)

    @cached_property
    def seifert(self):
        return _seifert_circles(self)


# --- construction -----------------------------------------------------------

def _check_connected(codes):
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(len(codes)))
    ends = defaultdict(list)
    for x, code in enumerate(codes):
        for label in code:
            ends[label].append(x)
    for label, (x, y) in ends.items():
        graph.add_edge(x, y, key=label)
    if not nx.is_connected(graph):
        parts = nx.number_connected_components(graph)
        raise DisconnectedDiagram(f"diagram splits into {parts} pieces")


def _derive_over_in(codes):
    """Propagate strand directions from the under-strands; returns the over-entry slot per crossing."""
    ends = defaultdict(list)
    for x, code in enumerate(codes):
        for s, label in enumerate(code):
            ends[label].append((x, s))

    incoming = {}
    queue = []

    def assign(pos, value):
        if pos in incoming:
            if incoming[pos] != value:
                x, s = pos
                raise InconsistentOrientation(
                    f"arc {codes[x][s]} at crossing {x} is both entering and leaving"
                )
            return
        incoming[pos] = value
        queue.append(pos)

    def propagate():
        while queue:
            x, s = queue.pop()
            value = incoming[(x, s)]
            label = codes[x][s]
            first, second = ends[label]
            assign(second if first == (x, s) else first, not value)
            if s % 2 == 1:
                assign((x, (s + 2) % 4), not value)

    for x in range(len(codes)):
        assign((x, 0), True)
        assign((x, 2), False)
    propagate()

    # Components that only ever pass over: fall back on arc labels increasing along the strand
    for x, code in enumerate(codes):
        if (x, 1) not in incoming:
            b, d = code[1], code[3]
            slot3_in = (b - d) == 1 or (d - b) > 1
            logger.info(f"Crossing {x} over-strand direction taken from arc labels")
            assign((x, 3), slot3_in)
            propagate()

    return [3 if incoming[(x, 3)] else 1 for x in range(len(codes))]


def _check_over_in(codes, over_in):
    ends = defaultdict(list)
    for x, code in enumerate(codes):
        for s, label in enumerate(code):
            ends[label].append(s == 0 or s == over_in[x])
    for label, flags in ends.items():
        if flags[0] == flags[1]:
            raise InconsistentOrientation(f"arc {label} has two {'heads' if flags[0] else 'tails'}")


def from_codes(codes, over_in=None, orientations=None):
    """Build a Diagram from crossing 4-tuples, normalizing arc labels to 1..2n."""
    codes = [tuple(code) for code in codes]
    if not codes:
        raise MalformedSyntax("empty crossing list")
    for code in codes:
        if len(code) != 4:
            raise MalformedSyntax(f"crossing {code} does not have four arcs")
    try:
        codes = [tuple(int(label) for label in code) for code in codes]
    except (TypeError, ValueError) as e:
        raise MalformedSyntax(f"non-integer arc label: {e}")

    counts = Counter(label for code in codes for label in code)
    wrong = sorted((label, k) for label, k in counts.items() if k != 2)
    if wrong:
        label, k = wrong[0]
        raise BadArcMultiplicity(
            f"arc {label} occurs {k} times (expected 2)", arc=label, count=k
        )

    relabel = {old: new for new, old in enumerate(sorted(counts), start=1)}
    codes = [tuple(relabel[label] for label in code) for code in codes]
    _check_connected(codes)

    if over_in is None:
        over_in = _derive_over_in(codes)
    else:
        over_in = list(over_in)
        _check_over_in(codes, over_in)

    d = Diagram(tuple(
        Crossing(x, code, 1 if o == 3 else -1) for x, (code, o) in enumerate(zip(codes, over_in))
    ))

    if len(d.face_cycles) != d.crossing_count + 2:
        raise NonPlanarRotation(
            f"face tracing gives {len(d.face_cycles)} faces, expected {d.crossing_count + 2}"
        )

    if orientations:
        if len(orientations) != d.components:
            raise MalformedSyntax(
                f"orient lists {len(orientations)} components, diagram has {d.components}"
            )
        flipped = [i for i, o in enumerate(orientations) if int(o) < 0]
        if flipped:
            d = reverse(d, flipped)
    return d


def _parse_orientations(text):
    values = re.findall(r"[+-]?\d+", text)
    if not values or any(abs(int(v)) != 1 for v in values):
        raise MalformedSyntax(f"orient directive must list +1/-1 values, got {text.strip()!r}")
    return [int(v) for v in values]


def parse_pd(text):
    """Parse PD text (`X(a,b,c,d)` tuples, `%` comments, `orient:` line) or the JSON diagram form."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            payload = json.loads(stripped)
        except json.JSONDecodeError as e:
            raise MalformedSyntax(f"invalid JSON diagram: {e}")
        if not isinstance(payload, dict) or "crossings" not in payload:
            raise MalformedSyntax("JSON diagram needs a 'crossings' list")
        return from_codes(payload["crossings"], orientations=payload.get("orientations"))

    codes = []
    orientations = None
    for line in text.splitlines():
        line = line.split("%", 1)[0]
        match = ORIENT_PATTERN.match(line)
        if match:
            orientations = _parse_orientations(match.group(1))
            continue
        codes.extend(tuple(int(v) for v in m.groups()) for m in CROSSING_PATTERN.finditer(line))
        leftover = WRAPPER_PATTERN.sub(" ", CROSSING_PATTERN.sub(" ", line))
        bad = "".join(ch if ch not in FILLER_CHARS else " " for ch in leftover).split()
        if bad:
            raise MalformedSyntax(f"unparseable token {bad[0]!r}")

    d = from_codes(codes, orientations=orientations)
    logger.info(f"Parsed diagram with {d.crossing_count} crossings and {d.components} components")
    return d


def to_pd_text(d):
    return " ".join(f"X({a},{b},{c},{e})" for a, b, c, e in d.codes)


def to_json(d):
    return {"crossings": [list(code) for code in d.codes], "orientations": [1] * d.components}


# --- derived diagrams ---------------------------------------------------------

def mirror(d):
    """Switch every crossing; all signs flip."""
    codes = []
    over_in = []
    for c in d.crossings:
        a, b, x, e = c.slots
        if c.sign > 0:
            codes.append((e, a, b, x))
        else:
            codes.append((b, x, e, a))
        over_in.append(3 if c.sign < 0 else 1)
    return from_codes(codes, over_in=over_in)


def reverse(d, components=None):
    """Reverse the orientation of the given components (indices into d.strands; default all)."""
    if components is None:
        components = range(d.components)
    flipped = set()
    for i in components:
        flipped.update(d.strands[i])

    codes = []
    over_in = []
    for c in d.crossings:
        slots = c.slots
        position = c.over_in
        if slots[0] in flipped:
            slots = slots[2:] + slots[:2]
            position = (position + 2) % 4
        if c.slots[c.over_in] in flipped:
            position = (position + 2) % 4
        codes.append(slots)
        over_in.append(position)
    return from_codes(codes, over_in=over_in)


def torus_diagram(n, positive=True):
    """Standard diagram of the (2, n) torus knot, n odd."""
    if n < 3 or n % 2 == 0:
        raise ValueError(f"(2, n) torus knot diagrams need odd n >= 3, got {n}")

    def lab(k):
        return (k - 1) % (2 * n) + 1

    codes = []
    for j in range(n):
        a, b, c, e = lab(2 * j + 1), lab(2 * j + n + 1), lab(2 * j + 2), lab(2 * j + n + 2)
        codes.append((b, c, e, a) if positive else (a, b, c, e))
    return from_codes(codes)


def canonical_form(d):
    """Smallest relabeled PD code over all starting arcs; equal for isomorphic diagrams."""
    best = None
    for start in sorted(d.arc_ends):
        labels = {}

        def walk(label):
            while label not in labels:
                labels[label] = len(labels) + 1
                label = d.next_arc(label)

        walk(start)
        while len(labels) < d.arc_count:
            for label in sorted(labels, key=labels.get):
                x, _ = d.heads[label]
                pending = [a for a in d.crossings[x].slots if a not in labels]
                if pending:
                    walk(pending[0])
                    break
        code = tuple(sorted(
            tuple(labels[a] for a in c.slots) + (c.sign,) for c in d.crossings
        ))
        if best is None or code < best:
            best = code
    return best


# --- faces and shading --------------------------------------------------------

def checkerboard(d):
    """Face colors keyed by face id; the shaded class is the coherently oriented one."""
    return d.face_colors


def _checkerboard(d):
    cycles = d.face_cycles
    graph = nx.Graph()
    graph.add_nodes_from(range(len(cycles)))
    for c in d.crossings:
        for s in range(4):
            graph.add_edge(d.face_of_corner[(c.id, s)], d.face_of_corner[(c.id, (s - 1) % 4)])
    if not nx.is_bipartite(graph):
        raise NotBipartite("face adjacency graph is not bipartite")
    classes = nx.bipartite.color(graph)

    score = {0: [0, 0], 1: [0, 0]}
    for i, cycle in enumerate(cycles):
        for x, t in cycle:
            score[classes[i]][0] += d.crossings[x].is_coherent(t)
            score[classes[i]][1] += 1

    coherent = [k for k in (0, 1) if score[k][0] == score[k][1]]
    if coherent:
        shaded = coherent[0]
    else:
        shaded = max((0, 1), key=lambda k: (score[k][0] * score[1 - k][1], k == classes[0]))
        logger.debug("No coherently oriented face class; shading the closer one")
    return {i: SHADED if classes[i] == shaded else UNSHADED for i in range(len(cycles))}


def faces(d):
    """All faces with checkerboard colors; F = crossings + 2."""
    colors = checkerboard(d)
    return [
        Face(i, cycle, colors[i], d.face_arcs(i)) for i, cycle in enumerate(d.face_cycles)
    ]


def unshaded_faces(d):
    """Unshaded faces in canonical order (smallest incident arc first)."""
    return [f for f in faces(d) if f.color == UNSHADED]


def seifert_circles(d):
    """Circles of the oriented smoothing, ordered by smallest arc."""
    return d.seifert


def _seifert_circles(d):
    seen = set()
    circles = []
    for start in sorted(d.arc_ends):
        if start in seen:
            continue
        arcs = []
        corners = []
        label = start
        while label not in seen:
            seen.add(label)
            arcs.append(label)
            x, s = d.heads[label]
            crossing = d.crossings[x]
            if not crossing.is_incoming((s + 1) % 4):
                out, corner = (s + 1) % 4, s
            else:
                out, corner = (s - 1) % 4, (s - 1) % 4
            corners.append((x, corner))
            label = crossing.slots[out]
        circles.append(SeifertCircle(len(circles), tuple(arcs), tuple(corners)))
    return tuple(circles)


def is_special(d):
    """Every Seifert circle bounds a face of the diagram (no circle nests inside another)."""
    face_sets = {frozenset(cycle) for cycle in d.face_cycles}
    return all(frozenset(circle.corners) in face_sets for circle in seifert_circles(d))


# --- validation -----------------------------------------------------------------

FLAG_CODES = (
    ("connected", "NotConnected"),
    ("reduced", "NotReduced"),
    ("alternating", "NotAlternating"),
    ("special", "NotSpecial"),
    ("uniform_sign", "NotUniformSign"),
)


@dataclass(frozen=True)
class ValidationReport:
    connected: bool
    alternating: bool
    reduced: bool
    special: bool
    uniform_sign: bool
    nugatory: tuple = ()
    separating_circle: bool = False

    @property
    def accepted(self):
        return not self.failures()

    def failures(self):
        return [code for flag, code in FLAG_CODES if not getattr(self, flag)]

    def to_dict(self):
        payload = {flag: getattr(self, flag) for flag, _ in FLAG_CODES}
        payload["nugatory"] = list(self.nugatory)
        payload["separating_circle"] = self.separating_circle
        payload["accepted"] = self.accepted
        return payload


def underlying_graph(d):
    """The 4-valent projection graph: crossings as nodes, arcs as keyed edges."""
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(d.crossing_count))
    for label, ((x, _), (y, _)) in d.arc_ends.items():
        graph.add_edge(x, y, key=label)
    return graph


def nugatory_crossings(d):
    """Crossings that are cut vertices, or that meet one face at two opposite corners."""
    nugatory = set()
    for cycle in d.face_cycles:
        corners = set(cycle)
        nugatory.update(x for x, t in cycle if (x, (t + 2) % 4) in corners)
    simple = nx.Graph(underlying_graph(d))
    simple.remove_edges_from(list(nx.selfloop_edges(simple)))
    nugatory.update(nx.articulation_points(simple))
    return tuple(sorted(nugatory))


def has_separating_circle(d):
    """True when a circle meeting the diagram in two points splits off crossings on both sides."""
    if d.crossing_count < 2:
        return False
    weighted = nx.Graph()
    weighted.add_nodes_from(range(d.crossing_count))
    for x, y, _ in underlying_graph(d).edges(keys=True):
        if x == y:
            continue
        if weighted.has_edge(x, y):
            weighted[x][y]["weight"] += 1
        else:
            weighted.add_edge(x, y, weight=1)
    cut_value, _ = nx.stoer_wagner(weighted)
    return cut_value < 4


def is_alternating(d):
    """Every arc runs from an over slot to an under slot."""
    return all(s1 % 2 != s2 % 2 for (_, s1), (_, s2) in d.arc_ends.values())


def validate(d):
    """Check the conditions for invariant computation; never raises for a parsed diagram."""
    connected = nx.is_connected(underlying_graph(d))
    nugatory = nugatory_crossings(d) if connected else ()
    separating = has_separating_circle(d) if connected else False
    report = ValidationReport(
        connected=connected,
        alternating=is_alternating(d),
        reduced=connected and not nugatory and not separating,
        special=is_special(d),
        uniform_sign=len(set(d.signs)) == 1,
        nugatory=nugatory,
        separating_circle=separating,
    )
    if report.failures():
        logger.info(f"Diagram rejected: {', '.join(report.failures())}")
    return report
