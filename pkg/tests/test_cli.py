import json
from fractions import Fraction

import pytest

from netlocal import cli, serialize
from netlocal.models import evaluate, minimal_pneq_model, pneq_behavior, threshold_pneq_model
from netlocal.network import Behavior, Network


def run_cli(capsys, *args):
    code = cli.main(list(args))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


class TestSubcommands:
    def test_bound_triangle(self, capsys):
        code, payload = run_cli(capsys, "bound", "triangle.json")
        assert code == 0
        assert payload["basic_bound"] == 9
        assert payload["refined_bounds"] == [6, 6, 6]

    def test_relax_size(self, capsys):
        code, payload = run_cli(capsys, "relax-size", "6")
        assert code == 0
        assert payload["moment_matrix_side"] == 7626

    def test_eval_round_trips_through_the_behavior_reader(self, capsys, tmp_path):
        code, payload = run_cli(capsys, "eval", "model-pneq-minimal.json")
        assert code == 0
        path = tmp_path / "behavior.json"
        path.write_text(json.dumps(payload))
        beh = serialize.load_behavior(path)
        assert beh.values == pneq_behavior().values

    def test_compress_output_is_a_loadable_model(self, capsys, tmp_path):
        code, payload = run_cli(capsys, "compress", "model-pneq-minimal.json", "--source", "0")
        assert code == 0
        path = tmp_path / "model.json"
        path.write_text(json.dumps(payload))
        model = serialize.load_model(path)
        assert evaluate(model).values == pneq_behavior().values

    def test_bell_test_local_exit_zero(self, capsys, tmp_path):
        net = Network.bell_scenario((2, 2), (2, 2))
        uniform = Behavior(net, tuple(Fraction(1, 4) for _ in range(16)))
        path = tmp_path / "uniform.json"
        path.write_text(json.dumps(serialize.behavior_to_dict(uniform)))
        code, payload = run_cli(capsys, "bell-test", str(path))
        assert code == 0
        assert payload["local"] is True

    def test_bell_test_pr_box_exit_one_with_certificate(self, capsys):
        code, payload = run_cli(capsys, "bell-test", "pr-box.json")
        assert code == 1
        cert = payload["certificate"]
        assert Fraction(cert["value"]) < 0
        assert len(cert["xi"]) == 16
        assert len(cert["tightStrategies"]) >= 8

    def test_bell_facets(self, capsys):
        code, payload = run_cli(capsys, "bell-facets", "chsh.json")
        assert code == 0
        assert len(payload["facets"]) == 24

    def test_possibilistic_exit_codes(self, capsys):
        code, payload = run_cli(capsys, "possibilistic", "--support", "000,111")
        assert code == 1 and payload["feasible"] is False
        code, payload = run_cli(
            capsys, "possibilistic", "--support", "000,001,010,011,100,101,110,111"
        )
        assert code == 0 and payload["feasible"] is True

    def test_sos_verify(self, capsys):
        code, payload = run_cli(capsys, "sos-verify")
        assert code == 0
        assert payload["verified"] is True
        assert payload["bound"] == "2/3"

    def test_quantum_table(self, capsys):
        code, payload = run_cli(capsys, "quantum-table", "--eta", "0.5")
        assert code == 0
        assert payload["verified"] is True
        assert abs(payload["entries"]["A0|B0|C0"] - 0.125) < 1e-12

    def test_triangle_search_finds_model(self, capsys):
        code, payload = run_cli(
            capsys, "triangle-search", "--target", "p-neq.json", "--starts", "200"
        )
        assert code == 0
        assert payload["model"] is not None
        assert payload["survivors"] > 0

    def test_threads_give_identical_output(self, capsys):
        code1, payload1 = run_cli(
            capsys, "triangle-search", "--target", "p-neq.json", "--starts", "50", "--threads", "1"
        )
        code2, payload2 = run_cli(
            capsys, "triangle-search", "--target", "p-neq.json", "--starts", "50", "--threads", "3"
        )
        assert (code1, payload1) == (code2, payload2)


class TestErrors:
    def test_bad_json_reports_line_and_column(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"parties": [,]}')
        code = cli.main(["bound", str(path)])
        err = capsys.readouterr().err
        assert code == 2
        assert "line 1" in err and "column" in err

    def test_missing_file(self, capsys):
        assert cli.main(["bound", "missing.json"]) == 2

    def test_resource_cap_exit_three(self, capsys):
        assert cli.main(["possibilistic", "--support", "000", "--cards", "3,3,3"]) == 3

    def test_out_writes_file(self, capsys, tmp_path):
        target = tmp_path / "result.json"
        code = cli.main(["relax-size", "5", "--out", str(target)])
        assert code == 0
        assert json.loads(target.read_text())["moment_matrix_side"] == 3828


class TestSerialization:
    def test_float_model_round_trip(self, tmp_path):
        model = threshold_pneq_model()
        path = tmp_path / "m.json"
        path.write_text(json.dumps(serialize.model_to_dict(model)))
        again = serialize.load_model(path)
        assert again.flavor == "float"
        assert max(
            abs(x - y) for x, y in zip(evaluate(again).values, evaluate(model).values)
        ) < 1e-15

    def test_network_by_path_reference(self, tmp_path):
        net = Network.triangle()
        (tmp_path / "net.json").write_text(json.dumps(serialize.network_to_dict(net)))
        beh_payload = serialize.behavior_to_dict(pneq_behavior())
        beh_payload["network"] = "net.json"
        (tmp_path / "beh.json").write_text(json.dumps(beh_payload))
        beh = serialize.load_behavior(tmp_path / "beh.json")
        assert beh.values == pneq_behavior().values
