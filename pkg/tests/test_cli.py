import json
from importlib.resources import files

import pytest
from click.testing import CliRunner

from deligne_action.cli import BEGIN, END, main


def run(*args):
    return CliRunner().invoke(main, list(args))


def report_of(result):
    out = result.output
    return json.loads(out[out.index(BEGIN) + len(BEGIN):out.index(END)])


def test_fuchsian_euler_prints_minus_two():
    res = run("fuchsian", "euler", "--genus", "2")
    assert res.exit_code == 0, res.output
    assert "euler_number: -2" in res.output
    doc = report_of(res)
    assert doc["schema"] == 1 and doc["passed"]
    assert doc["command"] == "fuchsian euler"


def test_atlas_verify_writes_report_and_figure(tmp_path):
    out = tmp_path / "atlas.json"
    res = run("--scenario", "sphere3", "atlas", "verify", "--emit", str(out))
    assert res.exit_code == 0, res.output
    doc = json.loads(out.read_text())
    assert doc == report_of(res)
    assert doc["scenario"] == "sphere3"
    for fig in doc["figures"]:
        assert fig.endswith(".png") and (tmp_path / fig.rsplit("/", 1)[-1]).exists()
    assert doc["figures"]


def test_shared_flags_work_after_the_subcommand():
    res = run("polyakov", "action", "--scenario", "torus", "--seed", "3")
    assert res.exit_code == 0, res.output
    doc = report_of(res)
    assert doc["seed"] == 3 and doc["scenario"] == "torus"


def test_unknown_kind_is_a_configuration_error(tmp_path):
    text = (files("deligne_action") / "scenarios" / "torus.toml").read_text()
    bad = tmp_path / "warped.toml"
    bad.write_text(text.replace('kind = "affine_beltrami"', 'kind = "warp"', 1))
    res = run("--scenario", str(bad), "polyakov", "build")
    assert res.exit_code == 2
    assert "deformation.kind" in res.output
    assert BEGIN not in res.output


@pytest.mark.parametrize("content", [None, "this is = = not toml"])
def test_unreadable_scenarios_exit_two(tmp_path, content):
    path = tmp_path / "broken.toml"
    if content is not None:
        path.write_text(content)
    res = run("--scenario", str(path), "atlas", "verify")
    assert res.exit_code == 2
    assert res.output.startswith("error:")


def test_failed_check_exits_one():
    res = run("--tol", "0", "pair", "--count", "2")
    assert res.exit_code == 1
    assert report_of(res)["passed"] is False
