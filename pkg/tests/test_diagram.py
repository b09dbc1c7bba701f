"""
PD diagrams.

Core claims:
    - parsing accepts bare tuples, Mathematica-style PD[X[...]], comments and the JSON form
    - arc labels are normalized to 1..2n
    - malformed input fails with the specific error: syntax, multiplicity, connectivity,
      orientation, planarity
    - face tracing gives crossings + 2 faces; the unshaded class and Seifert circles match hand counts
    - validation flags nugatory crossings, 2-arc separating circles, non-alternating and mixed-sign input
    - mirror, reverse and canonical_form behave as diagram symmetries
"""

import gc
import json
import weakref

import pytest

from knotres import diagram as dg
from knotres.errors import (
    BadArcMultiplicity,
    DisconnectedDiagram,
    InconsistentOrientation,
    MalformedSyntax,
    NonPlanarRotation,
)

from conftest import BUNDLED, TREFOIL_NEGATIVE, TREFOIL_POSITIVE, load_bundled


# -- Helpers -----------------------------------------------------------------

CURL = "X(1,1,2,2)"
TREFOIL_SUM = (
    "X(4,2,5,7) X(6,4,1,3) X(2,6,3,5) "
    "X(10,8,11,1) X(12,10,7,9) X(8,12,9,11)"
)
# trefoil with crossing 0 switched
TREFOIL_SWITCHED = "X(1,4,2,5) X(6,4,1,3) X(2,6,3,5)"


def _arc_sets(items):
    return sorted(tuple(sorted(arcs)) for arcs in items)


# == 1. Parsing ===================================================================

class TestParse:
    def test_trefoil(self):
        d = dg.parse_pd(TREFOIL_NEGATIVE)
        assert d.crossing_count == 3
        assert d.arc_count == 6
        assert d.components == 1
        assert d.signs == (-1, -1, -1)

    def test_positive_trefoil_signs(self):
        assert dg.parse_pd(TREFOIL_POSITIVE).signs == (1, 1, 1)

    def test_wrapper_and_comments(self):
        text = "% the trefoil\nPD[X[1,4,2,5], X[3,6,4,1],\n   X[5,2,6,3]]  % done\n"
        assert dg.parse_pd(text) == dg.parse_pd(TREFOIL_NEGATIVE)

    def test_labels_normalized(self):
        scaled = "X(10,40,20,50) X(30,60,40,10) X(50,20,60,30)"
        assert dg.parse_pd(scaled) == dg.parse_pd(TREFOIL_NEGATIVE)

    def test_json_form(self):
        d = dg.parse_pd(TREFOIL_NEGATIVE)
        assert dg.parse_pd(json.dumps(dg.to_json(d))) == d

    def test_pd_text_round_trip(self, diagram_8a2A):
        assert dg.parse_pd(dg.to_pd_text(diagram_8a2A)) == diagram_8a2A

    def test_orient_directive_reverses(self):
        d = dg.parse_pd(TREFOIL_POSITIVE)
        assert dg.parse_pd(TREFOIL_POSITIVE + "\norient: -1\n") == dg.reverse(d)

    def test_orient_directive_length(self):
        with pytest.raises(MalformedSyntax):
            dg.parse_pd(TREFOIL_POSITIVE + "\norient: 1 1\n")

    def test_curl_parses(self):
        d = dg.parse_pd(CURL)
        assert d.crossing_count == 1
        assert len(d.face_cycles) == 3


class TestParseErrors:
    def test_empty(self):
        with pytest.raises(MalformedSyntax):
            dg.parse_pd("  % nothing here\n")

    def test_stray_token(self):
        with pytest.raises(MalformedSyntax):
            dg.parse_pd("X(1,4,2,5) Y")

    def test_short_tuple(self):
        with pytest.raises(MalformedSyntax):
            dg.parse_pd("X(1,4,2)")

    def test_bad_json(self):
        with pytest.raises(MalformedSyntax):
            dg.parse_pd("{not json")

    def test_arc_multiplicity(self):
        with pytest.raises(BadArcMultiplicity) as exc:
            dg.parse_pd("X(1,4,2,5) X(3,6,4,2)")
        assert exc.value.details == {"arc": 1, "count": 1}
        assert exc.value.to_dict()["error"] == "BadArcMultiplicity"

    def test_disconnected(self):
        with pytest.raises(DisconnectedDiagram):
            dg.parse_pd("X(1,1,2,2) X(3,3,4,4)")

    def test_two_heads(self):
        with pytest.raises(InconsistentOrientation):
            dg.parse_pd("X(1,3,2,4) X(1,4,2,3)")

    def test_explicit_over_in_checked(self):
        # crossing 0 with its over-strand entering at slot 1 gives arc 2 two heads
        with pytest.raises(InconsistentOrientation):
            dg.from_codes([(4, 2, 5, 1), (6, 4, 1, 3), (2, 6, 3, 5)], over_in=[1, 3, 3])

    def test_virtual_crossing(self):
        with pytest.raises(NonPlanarRotation):
            dg.parse_pd("X(1,2,1,2)")


# == 2. Faces, shading and Seifert circles ======================================

class TestFaces:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_face_count(self, name):
        d = load_bundled(name)
        assert len(dg.faces(d)) == d.crossing_count + 2

    @pytest.mark.parametrize("name", BUNDLED)
    def test_every_corner_in_one_face(self, name):
        d = load_bundled(name)
        corners = [corner for cycle in d.face_cycles for corner in cycle]
        assert len(corners) == len(set(corners)) == 4 * d.crossing_count

    def test_trefoil_unshaded_faces(self):
        d = dg.parse_pd(TREFOIL_NEGATIVE)
        assert [f.arcs for f in dg.unshaded_faces(d)] == [(1, 4), (2, 5), (3, 6)]

    def test_trefoil_shaded_faces_are_triangles(self):
        d = dg.parse_pd(TREFOIL_NEGATIVE)
        shaded = [f.arcs for f in dg.faces(d) if f.color == dg.SHADED]
        assert _arc_sets(shaded) == [(1, 3, 5), (2, 4, 6)]

    @pytest.mark.parametrize("name", ["8a2A", "8a2B"])
    def test_8a2_has_five_unshaded(self, name):
        assert len(dg.unshaded_faces(load_bundled(name))) == 5

    def test_adjacent_faces_differ_in_color(self, diagram_8a2A):
        colors = dg.checkerboard(diagram_8a2A)
        for c in diagram_8a2A.crossings:
            for t in range(4):
                here = diagram_8a2A.face_of_corner[(c.id, t)]
                there = diagram_8a2A.face_of_corner[(c.id, (t + 1) % 4)]
                assert colors[here] != colors[there]


class TestSeifertCircles:
    def test_trefoil(self):
        circles = dg.seifert_circles(dg.parse_pd(TREFOIL_NEGATIVE))
        assert _arc_sets(c.arcs for c in circles) == [(1, 3, 5), (2, 4, 6)]

    def test_circles_cover_every_arc_once(self, diagram_8a2A):
        arcs = [a for c in dg.seifert_circles(diagram_8a2A) for a in c.arcs]
        assert sorted(arcs) == list(range(1, 17))

    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled_are_special(self, name):
        d = load_bundled(name)
        assert dg.is_special(d)
        # special: Seifert circles are exactly the shaded faces
        shaded = [f for f in dg.faces(d) if f.color == dg.SHADED]
        assert len(dg.seifert_circles(d)) == len(shaded)

    def test_cached_on_the_diagram(self):
        d = dg.parse_pd(TREFOIL_NEGATIVE)
        assert dg.seifert_circles(d) is dg.seifert_circles(d)
        assert dg.checkerboard(d) is dg.checkerboard(d)
        twin = dg.parse_pd(TREFOIL_NEGATIVE)
        assert dg.seifert_circles(twin) == dg.seifert_circles(d)
        assert dg.checkerboard(twin) == dg.checkerboard(d)

    def test_cache_does_not_outlive_the_diagram(self):
        d = dg.parse_pd(TREFOIL_NEGATIVE)
        dg.checkerboard(d)
        dg.seifert_circles(d)
        ref = weakref.ref(d)
        del d
        gc.collect()
        assert ref() is None


# == 3. Validation ================================================================

class TestValidate:
    @pytest.mark.parametrize("name", BUNDLED)
    def test_bundled_accepted(self, name):
        report = dg.validate(load_bundled(name))
        assert report.accepted
        assert report.failures() == []

    def test_curl_not_reduced(self):
        report = dg.validate(dg.parse_pd(CURL))
        assert not report.accepted
        assert report.failures()[0] == "NotReduced"
        assert report.nugatory == (0,)

    def test_connected_sum_not_reduced(self):
        report = dg.validate(dg.parse_pd(TREFOIL_SUM))
        assert report.nugatory == ()
        assert report.separating_circle
        assert report.failures()[0] == "NotReduced"

    def test_switched_crossing(self):
        d = dg.parse_pd(TREFOIL_SWITCHED)
        assert d.signs == (-1, 1, 1)
        report = dg.validate(d)
        assert report.reduced
        assert report.failures()[0] == "NotAlternating"
        assert "NotUniformSign" in report.failures()

    def test_report_dict(self):
        payload = dg.validate(dg.parse_pd(CURL)).to_dict()
        assert payload["accepted"] is False
        assert payload["reduced"] is False
        assert payload["nugatory"] == [0]


# == 4. Symmetries ================================================================

class TestSymmetries:
    def test_mirror_flips_signs(self, diagram_8a2A):
        assert dg.mirror(diagram_8a2A).signs == tuple(-s for s in diagram_8a2A.signs)

    def test_mirror_involution(self, diagram_8a2A):
        assert dg.mirror(dg.mirror(diagram_8a2A)) == diagram_8a2A

    def test_torus_generator(self):
        assert dg.torus_diagram(3) == dg.parse_pd(TREFOIL_POSITIVE)
        assert dg.torus_diagram(3, positive=False) == dg.parse_pd(TREFOIL_NEGATIVE)
        assert dg.mirror(dg.torus_diagram(5)) == dg.torus_diagram(5, positive=False)

    def test_torus_needs_odd(self):
        with pytest.raises(ValueError):
            dg.torus_diagram(4)

    def test_reverse_keeps_signs(self, diagram_8a2A):
        reversed_ = dg.reverse(diagram_8a2A)
        assert reversed_.signs == diagram_8a2A.signs
        assert dg.validate(reversed_).accepted

    def test_reverse_involution(self, diagram_8a2A):
        assert dg.reverse(dg.reverse(diagram_8a2A)) == diagram_8a2A

    def test_canonical_form_ignores_labels(self):
        shifted = "X(3,1,4,6) X(5,3,6,2) X(1,5,2,4)"
        assert dg.canonical_form(dg.parse_pd(shifted)) == dg.canonical_form(dg.parse_pd(TREFOIL_POSITIVE))

    def test_canonical_form_ignores_crossing_order(self, diagram_8a2A):
        shuffled = dg.from_codes(list(reversed(diagram_8a2A.codes)))
        assert dg.canonical_form(shuffled) == dg.canonical_form(diagram_8a2A)

    def test_canonical_form_separates_8a2_pair(self, diagram_8a2A, diagram_8a2B):
        assert dg.canonical_form(diagram_8a2A) != dg.canonical_form(diagram_8a2B)


# == 5. Non-special input =========================================================

FIGURE_EIGHT = "X(4,2,5,1) X(8,6,1,5) X(6,3,7,4) X(2,7,3,8)"


class TestFigureEight:
    def test_signs_mixed(self):
        assert dg.parse_pd(FIGURE_EIGHT).signs == (1, 1, -1, -1)

    def test_not_special(self):
        d = dg.parse_pd(FIGURE_EIGHT)
        assert len(dg.seifert_circles(d)) == 3
        assert not dg.is_special(d)

    def test_rejected(self):
        report = dg.validate(dg.parse_pd(FIGURE_EIGHT))
        assert report.alternating
        assert report.reduced
        assert report.failures() == ["NotSpecial", "NotUniformSign"]

    def test_report_stable_under_relabeling(self):
        relabeled = "X(40,20,50,10) X(80,60,10,50) X(60,30,70,40) X(20,70,30,80)"
        assert dg.validate(dg.parse_pd(relabeled)) == dg.validate(dg.parse_pd(FIGURE_EIGHT))

    def test_torus_five_circles(self):
        assert len(dg.seifert_circles(dg.torus_diagram(5))) == 2
