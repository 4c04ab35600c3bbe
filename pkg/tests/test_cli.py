import json
import math

import numpy as np
import pytest

from qmirror.cli import main
from qmirror.scripts import cut_scenario_script


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


@pytest.fixture
def script(tmp_path):
    def write(obj, name="script.json"):
        path = tmp_path / name
        path.write_text(json.dumps(obj))
        return str(path)

    return write


@pytest.mark.parametrize(
    "kind,alpha,expected",
    [("mirror", [0, 1], 0.36), ("liar", [1, 0], 0.64), ("mirror", "1@2.0", 0.36), ("dual-mirror", 1, 0.36)],
)
def test_simulate_composed_measurements(capsys, script, kind, alpha, expected):
    path = script(
        {"initial_state": {"a": 0.6, "b": 0.8}, "steps": [{"kind": kind, "alpha": alpha}, {"kind": "project", "index": 0}]}
    )
    code, report = run_json(capsys, "simulate", path)
    assert code == 0
    assert report["steps"][1]["probability"] == pytest.approx(expected, abs=1e-12)
    assert report["final"]["state"]["a"] == [1.0, 0.0]


def test_simulate_text_output(capsys, script):
    path = script({"initial_state": {"a": 0.6, "b": 0.8}, "steps": [{"kind": "mirror", "alpha": "i"}, {"kind": "project", "index": 0}]})
    code, out, _ = run(capsys, "simulate", path)
    assert code == 0
    assert "outcome 0 with probability 0.36" in out


def test_simulate_empty_script_echoes_state(capsys, script):
    code, report = run_json(capsys, "simulate", script({"initial_state": {"a": 0.6, "b": "0.8i"}, "steps": []}))
    assert code == 0
    assert report["steps"] == []
    assert report["final"] == report["initial"]
    assert report["final"]["state"]["b"] == [0.0, 0.8]


def test_simulate_fuzzy_and_random_projection(capsys, script):
    path = script(
        {
            "initial_state": {"a": 1, "b": 0},
            "steps": [{"kind": "fuzzy", "gate": "hadamard"}, {"kind": "project"}],
            "seed": 7,
        }
    )
    code, report = run_json(capsys, "simulate", path)
    assert code == 0
    assert report["steps"][0]["probabilities"] == pytest.approx([0.5, 0.5])
    assert report["steps"][1]["outcome"] in (0, 1)


def test_simulate_is_byte_deterministic(capsys, script):
    path = script({"initial_state": {"a": 0.6, "b": 0.8}, "steps": [{"kind": "project"}] * 3})
    first = run(capsys, "simulate", path, "--seed", "12345", "--json")
    second = run(capsys, "simulate", path, "--seed", "12345", "--json")
    assert first == second


@pytest.mark.parametrize(
    "obj,step",
    [
        ({"initial_state": {"a": 1, "b": 0}, "steps": [{"kind": "rotate"}]}, 0),
        ({"initial_state": {"a": 1, "b": 0}, "steps": [{"kind": "mirror"}, {"kind": "mirror", "alpha": 2}]}, 1),
        ({"initial_state": {"a": 1, "b": 0}, "steps": [{"kind": "project", "index": 3}]}, 0),
        ({"initial_state": {"a": 1, "b": 1}, "steps": []}, None),
        ({"steps": []}, None),
    ],
)
def test_simulate_validation_errors(capsys, script, obj, step):
    code, out, _ = run(capsys, "simulate", script(obj), "--json")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["kind"] == "validation"
    assert err.get("step") == step


def test_simulate_impossible_projection_is_engine_error(capsys, script):
    path = script({"initial_state": {"a": 1, "b": 0}, "steps": [{"kind": "project", "index": 1}]})
    code, out, _ = run(capsys, "simulate", path, "--json")
    assert code == 3
    assert json.loads(out)["error"]["step"] == 0


def test_simulate_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", str(tmp_path / "nope.json"))
    assert code == 2
    assert err.startswith("error:")


def test_decompose_identity(capsys):
    code, report = run_json(capsys, "decompose", '{"rows": [[1, 0], [0, 1]]}')
    assert code == 0
    assert all(v == 0 for v in report["euler"].values())
    assert report["residual"] == 0
    assert report["phase_shift"]["lambda"] == 0


def test_decompose_phase_gate(capsys):
    code, report = run_json(capsys, "decompose", '{"rows": [[1, 0], [0, "1@1.5707963267948966"]]}')
    assert code == 0
    assert report["phase_shift"]["lambda"] == pytest.approx(math.pi / 2, abs=1e-12)
    assert report["phase_shift"]["residual"] < 1e-12


def test_decompose_diagonal_alpha_phi_form(capsys):
    code, report = run_json(capsys, "decompose", '{"alpha": "0.6+0.8i", "phi": 0.3}')
    assert code == 0
    assert report["phase_shift"]["residual"] < 1e-12
    assert report["residual"] < 1e-12


def test_decompose_hadamard_from_file(capsys, script):
    s = 1 / math.sqrt(2)
    code, report = run_json(capsys, "decompose", script({"rows": [[s, s], [s, -s]]}))
    assert code == 0
    assert report["residual"] < 1e-10
    assert "phase_shift" not in report


def test_decompose_rejects_non_unitary(capsys):
    code, out, _ = run(capsys, "decompose", '{"rows": [[1, 1], [0, 1]]}', "--json")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["residual"] > 0.5
    code, _, text = run(capsys, "decompose", '{"rows": [[1, 1], [0, 1]]}')
    assert "residual" in text


def test_fuzzy_n2_prints_sigma_over_root3(capsys):
    code, report = run_json(capsys, "fuzzy", "2")
    assert code == 0
    r = 1 / math.sqrt(3)
    x1 = np.array(report["X"][0])
    np.testing.assert_allclose(x1[..., 0], [[0, r], [r, 0]], atol=1e-15)
    np.testing.assert_array_equal(x1[..., 1], 0)
    assert report["k"] == pytest.approx(2 / math.sqrt(3))
    assert "k_convention" in report
    code, out, _ = run(capsys, "fuzzy", "2")
    assert "X1 =" in out and "note:" in out


def test_fuzzy_n3_radius(capsys):
    code, report = run_json(capsys, "fuzzy", "3")
    assert code == 0
    assert report["radius_deviation"] < 1e-12
    assert report["commutator_deviation"] < 1e-12


@pytest.mark.parametrize("n", ["1", "0", "1025"])
def test_fuzzy_out_of_range(capsys, n):
    code, out, _ = run(capsys, "fuzzy", n, "--json")
    assert code == 2
    assert json.loads(out)["error"]["kind"] == "validation"


def test_logic_cut_script(capsys, script):
    code, out, _ = run(capsys, "logic", script(cut_scenario_script()))
    assert code == 0
    assert out.splitlines()[:4] == [
        "|- A    [cut]",
        "  |- A & A^    [axiom(mirror)]",
        "  A & A^ |- A    [&L]",
        "    A |- A    [id]",
    ]
    assert "mirror: |- A & A^  remaining 0" in out


def test_logic_repeat_exhausts_axiom(capsys, script):
    code, out, _ = run(capsys, "logic", script(cut_scenario_script()), "--repeat", "2", "--json")
    assert code == 3
    err = json.loads(out)["error"]
    assert (err["cause"], err["run"], err["step"]) == ("AxiomExhausted", 1, 0)


def test_logic_repeat_with_cloning(capsys, script):
    code, report = run_json(capsys, "logic", script(cut_scenario_script()), "--repeat", "2", "--allow-cloning")
    assert code == 0
    assert len(report["runs"]) == 2


def test_logic_p_cannot_cut(capsys, script):
    obj = cut_scenario_script()
    obj["profile"] = "P"
    code, out, _ = run(capsys, "logic", script(obj), "--json")
    assert code == 3
    err = json.loads(out)["error"]
    assert err["cause"] == "RuleNotAvailable"
    assert err["step"] == 1


def test_logic_classical_collapse(capsys, script):
    obj = {
        "profile": "A",
        "steps": [
            {"op": "assume", "sequent": "|- A", "source": "G"},
            {"op": "assume", "sequent": "|- A^", "source": "G"},
            {"op": "collapse", "premises": [0, 1]},
        ],
    }
    code, report = run_json(capsys, "logic", script(obj))
    assert code == 0
    assert report["runs"][0]["conclusions"][-1] == "|- _|_"


@pytest.mark.parametrize(
    "steps,step",
    [
        ([{"op": "jump"}], 0),
        ([{"op": "rule", "name": "cut", "premises": [0]}], 0),
        ([{"op": "rule", "name": "identity", "params": {"F": "A &"}}], 0),
        ([{"op": "assume", "sequent": "A"}], 0),
    ],
)
def test_logic_validation(capsys, script, steps, step):
    code, out, _ = run(capsys, "logic", script({"profile": "G", "steps": steps}), "--json")
    assert code == 2
    assert json.loads(out)["error"]["step"] == step


@pytest.mark.parametrize("seed", range(100))
def test_border_without_cloning_never_derives_falsum(capsys, seed):
    code, report = run_json(capsys, "border", "--seed", str(seed), "--bit", str(seed % 2))
    assert code == 0
    assert report["falsum_derived"] is False
    assert not any("_|_" in line for line in report["transcript"])
    assert report["g_judgement"] in ("|- A", "|- A^")
    assert report["g_second_use"] is not None
    assert set(report["a_received"][1:]) == {"|- A (+) A^", "A & A^ |-"} or set(report["a_received"][1:]) == {
        "|- A^ (+) A",
        "A^ & A |-",
    }


def test_border_with_cloning(capsys):
    code, out, _ = run(capsys, "border", "--seed", "3", "--allow-cloning")
    assert code == 0
    assert "-> |- A & A^" in out
    assert "derives |- _|_" in out


def test_border_communication_table(capsys):
    code, out, _ = run(capsys, "border")
    assert code == 0
    lines = out.splitlines()
    assert lines[-3:] == ["A@G: yes", "A@P: no", "G@P: yes"]


def test_border_help_documents_hadamard(capsys):
    with pytest.raises(SystemExit) as info:
        main(["border", "--help"])
    assert info.value.code == 0
    assert "Hadamard" in capsys.readouterr().out


def test_border_is_deterministic(capsys):
    assert run(capsys, "border", "--seed", "99", "--json") == run(capsys, "border", "--seed", "99", "--json")


@pytest.mark.parametrize(
    "argv", [[], ["frobnicate"], ["fuzzy"], ["fuzzy", "two"], ["simulate", "x", "--seed", "-1"], ["border", "--bit", "2"]]
)
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert "error" in err


def test_usage_error_json(capsys):
    code, out, _ = run(capsys, "frobnicate", "--json")
    assert code == 1
    assert json.loads(out)["error"]["kind"] == "usage"
