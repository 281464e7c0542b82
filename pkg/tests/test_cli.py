import json

import pytest

from lattice_skein import oracle, poset
from lattice_skein.cli import EXIT_BUDGET, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK, main
from lattice_skein.laurent import LaurentPoly

ASYM_B = "(3,4,4,3)"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_text(capsys):
    code, out, _ = run(capsys, "expand", "--m", "1", "--n", "1")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert len(lines) == 2
    polys = sorted(line.split("\t")[1] for line in lines)
    assert polys == ["A", "A^-1"]


def test_expand_json_matches_library(capsys):
    code, out, _ = run(capsys, "expand", "--m", "2", "--n", "2", "--format", "json")
    assert code == EXIT_OK
    rows = json.loads(out)
    table = oracle.full_expansion(2, 2)
    assert len(rows) == len(table)
    from lattice_skein import from_json

    for row in rows:
        assert table[from_json(json.dumps(row["state"]))] == LaurentPoly.parse(row["coefficient"])


def test_expand_json_is_deterministic_across_threads(capsys):
    _, one, _ = run(capsys, "expand", "--m", "3", "--n", "3", "--format", "json", "--threads", "1")
    _, two, _ = run(capsys, "expand", "--m", "3", "--n", "3", "--format", "json", "--threads", "2")
    assert one == two


def test_expand_restricted_and_filter(capsys, asym_state):
    code, out, _ = run(capsys, "expand", "--m", "4", "--n", "4", "--restricted",
                       "--filter-state", asym_state.dumps())
    assert code == EXIT_OK
    assert out.strip() == "1 + 2A^4 + A^8 + A^12"


def test_expand_filter_wrong_lattice(capsys, asym_state):
    code, _, err = run(capsys, "expand", "--m", "3", "--n", "3", "--filter-state", asym_state.dumps())
    assert code == EXIT_INVALID
    assert "L(4,4)" in err


def test_expand_budget(capsys):
    code, _, err = run(capsys, "expand", "--m", "5", "--n", "5")
    assert code == EXIT_BUDGET
    assert "budget" in err


def test_expand_out_file(capsys, tmp_path):
    dest = tmp_path / "l11.txt"
    code, out, _ = run(capsys, "expand", "--m", "1", "--n", "1", "--out", str(dest))
    assert code == EXIT_OK and out == ""
    assert len(dest.read_text().splitlines()) == 2


def test_coeff_text(capsys):
    code, out, _ = run(capsys, "coeff", "--b", ASYM_B)
    assert code == EXIT_OK
    assert "coefficient: 1 + 2A^4 + A^8 + A^12" in out
    assert "palindromic: false" in out
    assert "b_max: (3,4,4,3)" in out
    assert "b_min: (0,2,3,3)" in out


def test_coeff_json_from_state_file(capsys, tmp_path, asym_state):
    path = tmp_path / "state.json"
    path.write_text(asym_state.dumps())
    code, out, _ = run(capsys, "coeff", "--state", str(path), "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["coefficient"] == "1 + 2A^4 + A^8 + A^12"
    assert data["b_max"] == "(3,4,4,3)"
    assert data["properties"]["palindromic"] is False


@pytest.mark.parametrize("route", ["tree", "fiber", "oracle", "restricted"])
def test_coeff_routes_agree(capsys, route):
    _, out, _ = run(capsys, "coeff", "--b", ASYM_B, "--route", route, "--format", "json")
    assert json.loads(out)["coefficient"] == "1 + 2A^4 + A^8 + A^12"


def test_coeff_n_default_and_override(capsys):
    _, out, _ = run(capsys, "coeff", "--b", "(1,2)")
    assert "L(2,2)" in out
    _, out, _ = run(capsys, "coeff", "--b", "(1,2)", "--n", "3")
    assert "L(2,3)" in out


@pytest.mark.parametrize("argv", [
    ["coeff"],
    ["coeff", "--b", "(1,x)"],
    ["coeff", "--b", "(5)", "--n", "2"],
    ["coeff", "--state", "{not json"],
    ["coeff", "--state", '{"m": 1, "n": 1, "arcs": [["x1", "xp1"], ["y1", "x1"]]}'],
    ["coeff", "--b", "(1)", "--state", "{}"],
    ["export", "--what", "tree", "--state",
     '{"m": 1, "n": 2, "arcs": [["x1", "y1"], ["x2", "yp1"], ["xp1", "xp2"]]}'],
])
def test_invalid_input_exit_code(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INVALID
    assert err.startswith("error:")


def test_export_hasse(capsys):
    code, out, _ = run(capsys, "export", "--b", ASYM_B)
    assert code == EXIT_OK
    assert out.startswith("digraph fiber {")
    assert out.count("[label=") == 5
    assert out.count("->") == len(poset.hasse(poset.state_of((3, 4, 4, 3), 4)).edges)


def test_export_tree_labels_delays(capsys):
    code, out, _ = run(capsys, "export", "--what", "tree", "--b", ASYM_B)
    assert code == EXIT_OK
    assert out.startswith("digraph tree {")
    assert '"@2"' in out
    assert out.count("shape=box") == 3


def test_export_state_round_trip(capsys, asym_state):
    _, out, _ = run(capsys, "export", "--what", "state", "--b", ASYM_B)
    from lattice_skein import from_json

    assert from_json(out) == asym_state


def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--max-m", "1", "--max-n", "4")
    assert code == EXIT_OK
    assert "pass: 30 states checked" in out


def test_verify_restricted_only_when_full_is_over_budget(capsys):
    code, out, _ = run(capsys, "verify", "--max-m", "2", "--max-n", "3", "--max-full-log2", "4")
    assert code == EXIT_OK
    assert "restricted only" in out


def test_verify_skips_lattices_over_restricted_budget(capsys):
    code, out, _ = run(capsys, "verify", "--max-m", "2", "--max-n", "2", "--max-restricted", "4")
    assert code == EXIT_OK
    assert "skipped" in out


def test_verify_catches_injected_fault(capsys):
    code, _, err = run(capsys, "verify", "--max-m", "2", "--max-n", "2", "--inject-fault")
    assert code == EXIT_MISMATCH
    assert "FAIL" in err
    assert oracle.FLIP_CONVENTION is False


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--m", "2", "--n", "3")
    assert code == EXIT_OK
    assert "MISMATCH" not in out
    assert out.startswith("python")


def test_bench_budget(capsys):
    code, _, _ = run(capsys, "bench", "--m", "6", "--n", "6")
    assert code == EXIT_BUDGET


def test_missing_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
