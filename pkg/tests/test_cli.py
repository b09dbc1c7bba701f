"""
Command-line surface.

Core claims:
    - fp prints {"fp":"8/3"} for 8a2A, from a bundled path or a bare file name
    - inline edge lists and exported edge lists give the same FP as the diagram
    - domain failures exit 1 with a JSON error code; bad flags exit 2
    - batch prints rows sorted by FP and groups diagrams sharing a value
    - output is byte-identical across runs
"""

import json
import os

import pytest

from knotres.cli import main

from conftest import TREFOIL_POSITIVE


# -- Helpers -----------------------------------------------------------------

def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def _json(capsys, *argv):
    code, out = _run(capsys, *argv)
    return code, json.loads(out)


# == 1. Single-diagram commands =====================================================

class TestFP:
    def test_bundled_path(self, capsys, data_dir):
        code, payload = _json(capsys, "fp", "--input", os.path.join(data_dir, "diagrams", "8a2A.pd"))
        assert code == 0
        assert payload == {"fp": "8/3"}

    def test_compact_output(self, capsys, data_dir):
        code, out = _run(capsys, "fp", "--input", os.path.join(data_dir, "diagrams", "8a2A.pd"))
        assert code == 0
        assert out == '{"fp":"8/3"}\n'

    def test_bare_name_resolves(self, capsys):
        code, payload = _json(capsys, "fp", "--input", "data/8a2B.pd")
        assert code == 0
        assert payload == {"fp": "8/3"}

    def test_inline_pd(self, capsys):
        code, payload = _json(capsys, "fp", "--pd", TREFOIL_POSITIVE)
        assert payload == {"fp": "1"}

    @pytest.mark.parametrize("weight", ["1", "-1"])
    def test_inline_edge_list(self, capsys, weight):
        spec = '{"n":3,"edges":[[0,1,W],[1,2,W],[2,0,W]]}'.replace("W", weight)
        code, payload = _json(capsys, "fp", "--edge-list", spec)
        assert code == 0
        assert payload == {"fp": "1"}

    def test_table_output(self, capsys):
        code, out = _run(capsys, "fp", "--pd", TREFOIL_POSITIVE, "--output", "table")
        assert out.strip() == "1"

    def test_deterministic(self, capsys, data_dir):
        path = os.path.join(data_dir, "diagrams", "8a2A.pd")
        first = _run(capsys, "report", "--input", path)[1]
        second = _run(capsys, "report", "--input", path)[1]
        assert first == second


class TestOtherCommands:
    def test_tait(self, capsys):
        code, payload = _json(capsys, "tait", "--pd", TREFOIL_POSITIVE)
        assert code == 0
        assert payload["n"] == 3
        assert sorted(edge[:2] for edge in payload["edges"]) == [[0, 1], [1, 2], [2, 0]]
        assert all(edge[2] == -1 for edge in payload["edges"])
        assert sorted(payload["crossings"]) == [0, 1, 2]

    def test_tait_8a2A(self, capsys):
        code, payload = _json(capsys, "tait", "--input", "8a2A.pd")
        assert code == 0
        assert len(payload["edges"]) == 8

    def test_laplacian(self, capsys):
        code, payload = _json(capsys, "laplacian", "--pd", TREFOIL_POSITIVE)
        assert payload["laplacian"] == [["-1", "1", "0"], ["0", "-1", "1"], ["1", "0", "-1"]]

    def test_alexander(self, capsys):
        code, payload = _json(capsys, "alexander", "--pd", TREFOIL_POSITIVE, "--delete-vertex", "0")
        assert payload["alexander"] == ["1", "-1", "1"]
        assert payload["text"] == "t^2 - t + 1"
        assert payload["delete_vertex"] == 0

    def test_charpoly(self, capsys):
        code, payload = _json(capsys, "charpoly", "--input", "8a2A.pd")
        assert payload["char_poly"] == ["0", "-15", "-32", "-24", "-8", "-1"]

    def test_report(self, capsys):
        code, payload = _json(capsys, "report", "--input", "8a2A.pd")
        assert code == 0
        assert payload["fp"] == "8/3"
        assert all(payload["checks"].values())

    def test_validate_accepted(self, capsys):
        code, payload = _json(capsys, "validate", "--pd", TREFOIL_POSITIVE)
        assert code == 0
        assert payload["accepted"] is True

    def test_export_then_fp(self, capsys, tmp_path):
        dest = tmp_path / "8a2A.json"
        code, payload = _json(capsys, "export", "--input", "8a2A.pd", "--dest", str(dest))
        assert code == 0
        assert payload["n"] == 5
        code, payload = _json(capsys, "fp", "--edge-list", str(dest))
        assert payload == {"fp": "8/3"}

    def test_flype_apply_with_tangle_file(self, capsys, data_dir):
        code, payload = _json(
            capsys, "flype-apply", "--input", "8a2A.pd",
            "--tangle", os.path.join(data_dir, "tangles", "8a2A.yaml"),
        )
        assert code == 0
        assert len(payload["diagram"]["crossings"]) == 8

    def test_flype_apply_inline(self, capsys):
        code, payload = _json(capsys, "flype-apply", "--input", "8a2A.pd", "--pivot", "2", "--crossings", "0,5")
        assert code == 0
        code, fp_payload = _json(capsys, "fp", "--pd", payload["pd"])
        assert fp_payload == {"fp": "8/3"}

    def test_flype_list(self, capsys):
        code, payload = _json(capsys, "flype-list", "--input", "8a2A.pd")
        assert {"crossings": [0, 5], "pivot": 2} in [
            {"crossings": t["crossings"], "pivot": t["pivot"]} for t in payload["flypes"]
        ]

    def test_orbit(self, capsys):
        code, payload = _json(capsys, "orbit", "--pd", TREFOIL_POSITIVE, "--depth", "1")
        assert code == 0
        assert payload["fp_values"] == ["1"]


# == 2. Failures ====================================================================

class TestFailures:
    def test_not_reduced(self, capsys):
        code, payload = _json(capsys, "validate", "--pd", "X(1,1,2,2)")
        assert code == 1
        assert payload["error"] == "NotReduced"

    def test_fp_of_rejected_diagram(self, capsys):
        code, payload = _json(capsys, "fp", "--pd", "X(1,1,2,2)")
        assert code == 1
        assert payload["error"] == "NotReduced"

    def test_bad_multiplicity(self, capsys):
        code, payload = _json(capsys, "fp", "--pd", "X(1,4,2,5) X(3,6,4,2)")
        assert code == 1
        assert payload["error"] == "BadArcMultiplicity"

    def test_unbalanced_strict(self, capsys):
        code, payload = _json(capsys, "fp", "--strict", "--edge-list", '{"n":2,"edges":[[0,1,1]]}')
        assert code == 1
        assert payload["error"] == "UnbalancedGraph"

    def test_missing_file(self, capsys):
        code, payload = _json(capsys, "fp", "--input", "no_such_diagram.pd")
        assert code == 1
        assert payload["error"] == "InputNotFound"

    def test_edge_list_for_flypes(self, capsys):
        code, out = _run(capsys, "flype-list", "--edge-list", '{"n":2,"edges":[[0,1,1],[1,0,1]]}')
        assert code == 2

    def test_no_input(self, capsys):
        code, out = _run(capsys, "fp")
        assert code == 2

    def test_orbit_depth_zero(self, capsys):
        code, out = _run(capsys, "orbit", "--pd", TREFOIL_POSITIVE, "--depth", "0")
        assert code == 2

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as exc:
            main(["fp", "--no-such-flag"])
        assert exc.value.code == 2


# == 3. Batch =======================================================================

class TestBatch:
    def test_bundled_manifest(self, capsys):
        code, payload = _json(capsys, "batch")
        assert code == 0
        names = [row["name"] for row in payload["rows"]]
        assert names == ["3a1", "5a2", "7a7", "9a41", "8a2A", "8a2B"]
        assert all(row["matches_expected"] for row in payload["rows"])
        assert payload["groups"] == [
            {"fp": "1", "names": ["3a1", "5a2", "7a7", "9a41"]},
            {"fp": "8/3", "names": ["8a2A", "8a2B"]},
        ]

    def test_empty_manifest(self, capsys, tmp_path):
        manifest = tmp_path / "manifest.yaml"
        manifest.write_text("")
        code, payload = _json(capsys, "batch", "--manifest", str(manifest))
        assert code == 0
        assert payload == {"groups": [], "rows": []}

    def test_failed_entry_kept(self, capsys, tmp_path):
        (tmp_path / "curl.pd").write_text("X(1,1,2,2)\n")
        (tmp_path / "trefoil.pd").write_text(TREFOIL_POSITIVE + "\n")
        manifest = tmp_path / "manifest.yaml"
        manifest.write_text(
            "curl:\n  file: curl.pd\n"
            "trefoil:\n  file: trefoil.pd\n  expected_fp: '1'\n"
        )
        code, payload = _json(capsys, "batch", "--manifest", str(manifest), "--workers", "1")
        assert code == 0
        assert [row["name"] for row in payload["rows"]] == ["trefoil", "curl"]
        assert payload["rows"][1]["status"] == "failed"
        assert payload["rows"][1]["error"] == "NotReduced"
        assert payload["groups"] == [{"fp": "1", "names": ["trefoil"]}]
