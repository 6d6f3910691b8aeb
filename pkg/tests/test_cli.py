import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from conifold.cli import EXIT_INPUT, EXIT_INVARIANT, EXIT_OK, EXIT_RESOURCE, main
from conifold.config import bundled, from_mapping, load
from conifold.lattice import InputError

GOLDEN = Path(__file__).parent / "golden"
SYMPL4 = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return path


def test_analyze_a2(capsys):
    code, out, _ = run(capsys, "analyze", bundled("a2.json"))
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["atom_decomposition"]["splits"] is False
    assert rep["interaction_graph"]["edges"] == [{"i": 1, "j": 2, "lambda": 1}]
    assert all("invariant" in c and "passed" in c for c in rep["operator_identities"])
    assert rep["failures"] == []


def test_analyze_a1xa1(capsys):
    code, out, _ = run(capsys, "analyze", bundled("a1xa1.json"))
    assert code == EXIT_OK
    assert json.loads(out)["atom_decomposition"]["splits"] is True


@pytest.mark.parametrize("name", ["a2", "a1xa1"])
def test_analyze_matches_golden(capsys, name):
    _, first, _ = run(capsys, "analyze", bundled(f"{name}.json"))
    _, second, _ = run(capsys, "analyze", bundled(f"{name}.json"))
    assert first == second
    assert first == (GOLDEN / f"{name}.json").read_text()


def test_analyze_deterministic_across_processes():
    cmd = [sys.executable, "-m", "conifold.cli", "analyze", str(bundled("a2.json")), "--samples", "3", "--seed", "7"]
    runs = [subprocess.run(cmd, capture_output=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1]


def test_rationals_serialize_as_strings(tmp_path, capsys):
    cfg = {"rank": 2, "pairing": [[0, "1/2"], ["-1/2", 0]], "cycles": [[1, 0], [0, "2/3"]]}
    code, out, _ = run(capsys, "analyze", write(tmp_path, "q.json", cfg))
    assert code == EXIT_OK
    assert json.loads(out)["intersection_matrix"] == [[0, "1/3"], ["-1/3", 0]]


def test_non_skew_pairing_rejected(tmp_path, capsys):
    cfg = {"rank": 2, "pairing": [[0, 1], [1, 0]], "cycles": [[1, 0]]}
    code, _, err = run(capsys, "analyze", write(tmp_path, "bad.json", cfg))
    assert code == EXIT_INPUT
    assert "pairing not skew-symmetric" in json.loads(err)["message"]


def test_parse_errors_have_location(tmp_path, capsys):
    code, _, err = run(capsys, "analyze", write(tmp_path, "broken.json", '{"rank": 4,\n "pairing": [}'))
    assert code == EXIT_INPUT
    assert "broken.json:2:" in json.loads(err)["message"]
    cfg = {"rank": 2, "pairing": [[0, 1], [-1, 0]], "cycles": [[1, 0.5]]}
    code, _, err = run(capsys, "analyze", write(tmp_path, "float.json", cfg))
    assert code == EXIT_INPUT
    assert "cycles[0]" in json.loads(err)["message"]


@pytest.mark.parametrize("raw, fragment", [
    ({"pairing": SYMPL4, "cycles": []}, "rank"),
    ({"rank": 4, "pairing": SYMPL4, "cycles": [[1, 0, 0]]}, "cycles[0]"),
    ({"rank": 3, "pairing": SYMPL4, "cycles": []}, "pairing"),
    ({"rank": 4, "pairing": SYMPL4, "cycles": [[1, 0, 0, 0]], "frobenius": {"z": [0, 0]}}, "frobenius.z"),
    ({"rank": 4, "pairing": SYMPL4, "cycles": [[1, 0, 0, 0]], "kdata": {"chi_with_S": [1, 2]}}, "kdata"),
    ({"rank": 4, "pairing": SYMPL4, "cycles": [[1, 0, 0, 0]], "cluster": {"central_charges": []}}, "cluster"),
])
def test_field_diagnostics(raw, fragment):
    with pytest.raises(InputError, match=fragment.replace("[", r"\[")):
        from_mapping(raw)


def test_toml_config_loads():
    dc = load(bundled("single_node.toml"))
    assert dc.cycles.r == 1 and dc.cycles.n == 4


def test_braid_command(capsys):
    code, out, _ = run(capsys, "braid", bundled("a2.json"), 1, 2)
    assert code == EXIT_OK and json.loads(out)["relation"] == "braid"
    _, out, _ = run(capsys, "braid", bundled("a1xa1.json"), 1, 2, "--text")
    assert out.strip() == "commuting"
    _, out, _ = run(capsys, "braid", bundled("lambda2.json"), 2, 1, "--text")
    assert out.strip() == "neither"
    code, _, _ = run(capsys, "braid", bundled("a2.json"), 1, 3)
    assert code == EXIT_INPUT


def test_mutate_command(capsys, tmp_path):
    code, out, _ = run(capsys, "mutate", bundled("a2.json"), 1, 2)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["mutated_config"]["cycles"] == [[1, 0, -1, 0], [0, 0, 1, 0]]
    assert rep["cluster"]["comparison"]["cluster"] == [2.0, 0.0]
    assert rep["cluster"]["comparison"]["linear_transport"] == [1.0, 0.0]
    # the mutated config round-trips through the inverse move
    path = write(tmp_path, "m.json", rep["mutated_config"])
    _, out, _ = run(capsys, "mutate", path, 1, 2, "--inverse")
    assert json.loads(out)["mutated_config"]["cycles"] == [[1, 0, 0, 0], [0, 0, 1, 0]]
    # lambda = 0 leaves the cycles alone
    _, out, _ = run(capsys, "mutate", bundled("a1xa1.json"), 1, 2)
    assert json.loads(out)["mutated_config"]["cycles"] == [[1, 0, 0, 0], [0, 1, 0, 0]]


def test_monodromy_command(capsys):
    code, out, _ = run(capsys, "monodromy", bundled("single_node.toml"))
    assert code == EXIT_OK
    mono = json.loads(out)["monodromy"]
    assert mono["relative_unipotency"] < 1e-8
    assert all(c["passed"] for c in mono["checks"])
    ccw = np.array([[complex(*v) for v in row] for row in mono["M"]])
    _, out, _ = run(capsys, "monodromy", bundled("single_node.toml"), "--orientation", "cw", "--z", "1,0")
    cw = json.loads(out)["monodromy"]
    assert cw["loop"]["orientation"] == "cw"
    m_cw = np.array([[complex(*v) for v in row] for row in cw["M"]])
    assert np.max(np.abs(ccw @ m_cw - np.eye(4))) < 1e-8


def test_monodromy_errors(capsys):
    code, _, err = run(capsys, "monodromy", bundled("single_node.toml"), "--radius", "1.5")
    assert code == EXIT_INPUT and "loop would enclose q=0" in err
    code, _, err = run(capsys, "monodromy", bundled("single_node.toml"), "--max-steps", "5")
    assert code == EXIT_RESOURCE and json.loads(err)["error"] == "resource"


def test_group_cap_resource_error(capsys):
    code, _, err = run(capsys, "analyze", bundled("a2.json"), "--cap", "3")
    assert code == EXIT_RESOURCE


def test_report_command(capsys):
    code, out, _ = run(capsys, "report", bundled("single_node_kdata.json"))
    rep = json.loads(out)
    assert rep["kdata"]["decategorification"]["commutes"]
    assert rep["kdata"]["n_int"]["rank"] <= 1
    assert code == (EXIT_INVARIANT if rep["failures"] else EXIT_OK)
    assert code == EXIT_OK


def test_text_rendering(capsys):
    code, out, _ = run(capsys, "analyze", bundled("a2.json"), "--text")
    assert code == EXIT_OK
    assert "[PASS] commutator_closed_form_matches_direct" in out
    assert "[FAIL]" not in out


def test_invariant_failure_exit_code(capsys, monkeypatch):
    import conifold.report as report

    real = report.operator_identities

    def broken(config):
        out = real(config)
        out[0] = {"invariant": out[0]["invariant"], "passed": False}
        return out

    monkeypatch.setattr(report, "operator_identities", broken)
    code, out, _ = run(capsys, "analyze", bundled("a2.json"))
    assert code == EXIT_INVARIANT
    assert json.loads(out)["failures"] == ["pairing_skew_symmetric"]
