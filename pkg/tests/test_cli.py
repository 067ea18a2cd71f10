import json

from lgmirror import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_info(capsys):
    code, payload = run_json(capsys, "info", "x1^4")
    assert code == 0
    result = payload["result"]
    assert result["weights"] == ["1/4"]
    assert result["milnor_number"] == 3
    assert result["group_order"] == 4
    assert result["J"] == ["1/4"]


def test_dual(capsys):
    code, payload = run_json(capsys, "dual", "x1^2*x2+x2^2")
    assert code == 0
    assert payload["result"]["dual"] == "x1^2 + x1*x2^2"


def test_fourpoint_chain22(capsys):
    code, payload = run_json(capsys, "fourpoint", "x1^2*x2+x2^2")
    assert code == 0
    assert payload["result"]["F"] == [None, "-1/2"]
    assert payload["result"]["chiodo"][1] == "-1/2"
    assert payload["result"]["match"] is True


def test_threept(capsys):
    code, payload = run_json(capsys, "threept", "x1^2*x2+x2^2",
                             "x2", "x2", "1")
    assert code == 0
    assert payload["result"]["value"] == "-2"


def test_basis_and_pairing(capsys):
    code, payload = run_json(capsys, "basis", "x1^2*x2+x2^2*x1")
    assert code == 0
    assert payload["result"]["dimension"] == 4
    sectors = [e["sector"] for e in payload["result"]["elements"]]
    assert sectors.count("broad") == 2
    code, payload = run_json(capsys, "pairing", "x1^2*x2+x2^2*x1")
    assert code == 0
    assert payload["result"]["match"] is True


def test_reconstruct(capsys):
    code, payload = run_json(capsys, "reconstruct", "x1^3", "--max-k", "4")
    assert code == 0
    assert payload["result"]["k=4"] == {"1; 1; 1; 1": "-1/3"}


def test_verify_pass(capsys):
    code, payload = run_json(capsys, "verify", "x1^2*x2+x2^2")
    assert code == 0
    assert payload["result"]["passed"] is True


def test_input_error_exit_2(capsys):
    code, payload = run_json(capsys, "info", "x1^3 + 2*x1")
    assert code == 2
    assert payload["error"]["type"] == "PolynomialError"
    code, payload = run_json(capsys, "info", "x1^2*x2^2+x2^3")
    assert code == 2


def test_deterministic_output(capsys):
    _, out1 = run(capsys, "basis", "x1^3*x2+x2^2*x1")
    _, out2 = run(capsys, "basis", "x1^3*x2+x2^2*x1")
    assert out1 == out2
    _, out1 = run(capsys, "reconstruct", "x1^2*x2+x2^2", "--max-k", "5")
    _, out2 = run(capsys, "reconstruct", "x1^2*x2+x2^2", "--max-k", "5")
    assert out1 == out2


def test_file_input(tmp_path, capsys):
    f = tmp_path / "poly.txt"
    f.write_text("x1^2*x2+x2^2\n")
    code, payload = run_json(capsys, "info", "--file", str(f))
    assert code == 0
    assert payload["result"]["milnor_number"] == 3


def test_catalog_selftest(tmp_path, capsys):
    f = tmp_path / "cat.txt"
    f.write_text("x1^3\nx1^2*x2+x2^2\n")
    code, payload = run_json(capsys, "selftest", "--catalog", str(f))
    assert code == 0
    assert len(payload["result"]) == 2
    assert all(r["passed"] for r in payload["result"])
