import json

from click.testing import CliRunner

from src.cli import cli

runner = CliRunner()


def invoke(*args):
    return runner.invoke(cli, [str(a) for a in args])


def test_extremal_json():
    result = invoke("extremal", "--n", 4, "--k", 2, "--t", 4)
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["status"] == "optimal"
    assert data["value"] == "1/6"
    assert data["primal"]["pmf"] == [{"w": -2, "p": "1/3"}, {"w": 0, "p": "1/2"}, {"w": 4, "p": "1/6"}]
    assert data["dual"]["coeffs"] == ["0/1", "1/12", "1/24"]


def test_tail_formats():
    result = invoke("tail", "--n", 4, "--t", 2)
    assert result.exit_code == 0
    assert json.loads(result.stdout) == {"n": 4, "t": 2, "tail": "5/16"}

    result = invoke("tail", "--n", 4, "--t", 2, "--format", "csv")
    assert result.stdout.strip().splitlines() == ["n,t,tail", "4,2,5/16"]

    result = invoke("tail", "--n", 4, "--t", 2, "--format", "table")
    assert "0.312500" in result.stdout


def test_smooth_slice():
    result = invoke("smooth", "--n", 1, "--slice", 1, "--rho", "1/2")
    assert result.exit_code == 0
    assert json.loads(result.stdout)["pmf"] == [{"w": -1, "p": "1/4"}, {"w": 1, "p": "3/4"}]


def test_smooth_rounds():
    result = invoke("smooth", "--n", 2, "--slice", 2, "--rounds", 1)
    assert json.loads(result.stdout)["pmf"] == [{"w": 0, "p": "1/2"}, {"w": 2, "p": "1/2"}]


def test_bias_profile():
    result = invoke("bias", "--n", 3, "--slice", 1)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["bias"] == ["1/1", "1/3", "-1/3", "-1/1"]


def test_invalid_inputs_exit_2():
    assert invoke("smooth", "--n", 4, "--rho", "abc").exit_code == 2
    assert invoke("smooth", "--n", 4, "--rho", "3/2").exit_code == 2
    assert invoke("smooth", "--n", 4).exit_code == 2
    assert invoke("tail", "--t", 2).exit_code == 2
    assert invoke("tail", "--n", 4, "--slice", 1, "--t", 0).exit_code == 2
    assert invoke("extremal", "--n", 4, "--k", 5, "--t", 4).exit_code == 2


def test_infeasible_construct_exit_1():
    result = invoke("construct", "--n", 4, "--k", 2, "--mod", 8, "--residue", 4)
    assert result.exit_code == 1
    assert json.loads(result.stdout)["status"] == "infeasible"


def test_construct_on_residue_class():
    result = invoke("construct", "--n", 8, "--k", 2, "--mod", 4, "--objective", "max_moment")
    assert result.exit_code == 0
    weights = [entry["w"] for entry in json.loads(result.stdout)["primal"]["pmf"]]
    assert all(w % 4 == 0 for w in weights)


def test_output_feeds_back_as_input(tmp_path):
    path = tmp_path / "extremal.json"
    result = invoke("extremal", "--n", 4, "--k", 2, "--t", 4, "--output", path)
    assert result.exit_code == 0
    assert result.stdout == ""

    result = invoke("tail", "--input", path, "--t", 4)
    assert json.loads(result.stdout)["tail"] == "1/6"

    result = invoke("sparsify", "--input", path, "--k", 2)
    assert len(json.loads(result.stdout)["pmf"]) == 3


def test_sparsify_binomial():
    result = invoke("sparsify", "--n", 8, "--k", 2)
    assert json.loads(result.stdout)["pmf"] == [
        {"w": -8, "p": "1/16"}, {"w": 0, "p": "7/8"}, {"w": 8, "p": "1/16"},
    ]


def test_pipeline_on_extremal_input(tmp_path):
    path = tmp_path / "source.json"
    invoke("extremal", "--n", 60, "--k", 4, "--t", 16, "--output", path)
    result = invoke("pipeline", "--input", path, "--k", 4)
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["certified"] and data["interval_ok"] and data["support_ok"]
    assert len(data["rows"]) == 60


def test_pipeline_reports_source_interval_separately():
    result = invoke("pipeline", "--n", 10, "--k", 2)
    data = json.loads(result.stdout)
    assert data["interval_ok"] is True
    assert data["source_interval_ok"] is False


def test_separate_thm10():
    result = invoke("separate", "--scenario", "thm10", "--n", 16, "--weights=-4", "--weights=4")
    assert result.exit_code == 0
    data = json.loads(result.stdout)
    assert data["scenario"] == "thm10"
    assert not data["advantage"].startswith("-")
    assert data["advantage"] == "20496205/2147483648"


def test_gaussmix_exact_tasks():
    result = invoke("gaussmix", "--task", "inverse", "--k", 1, "--q", 2)
    assert result.exit_code == 0
    assert json.loads(result.stdout)["details"]["max_entry"] == "2/3"

    result = invoke("gaussmix", "--task", "powers", "--k", 2)
    assert json.loads(result.stdout)["passed"] is True

    result = invoke("gaussmix", "--task", "gapmiddle", "--k", 1)
    assert abs(float(json.loads(result.stdout)["details"]["lower_bound"]) - 0.1080831) < 1e-6

    result = invoke("gaussmix", "--task", "series", "--x", "1/2")
    assert result.exit_code == 0


def test_verify_core_suite():
    result = invoke("verify", "--suite", "core", "--format", "csv")
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "name,passed"
    assert all(line.endswith("True") for line in lines[1:])
