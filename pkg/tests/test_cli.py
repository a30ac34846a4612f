import json

from commands.cli import build_parser, load_config, main


def test_build_ball(capsys):
    assert main(["build-ball", "--radius", "2"]) == 0
    assert "17" in capsys.readouterr().out


def test_build_ball_dot(tmp_path):
    assert main(["build-ball", "--radius", "1", "--format", "dot", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "ball.dot").read_text().count("shape=") == 5


def test_find_cyclic(capsys):
    assert main(["separate", "find-cyclic", "--gen", "a"]) == 0
    assert json.loads(capsys.readouterr().out) == {"c": "b"}


def test_finite_index_is_a_precondition_failure():
    assert main(["separate", "find-cyclic", "--gen", "a", "--gen", "b"]) == 2


def test_separate_check(capsys):
    assert main(["separate", "check", "--gen", "a", "--word", "b a b'"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["verdict"] == "witness"
    assert data["method"] == "cyclic-scan"


def test_budget_exit_code():
    assert main(["build-ball", "--radius", "4", "--budget", "10"]) == 3


def test_malformed_word_exit_code():
    assert main(["separate", "check", "--gen", "a", "--word", "x"]) == 2


def test_cogrowth_needs_free_host():
    assert main(["cogrowth", "--genus", "2", "--gen", "a"]) == 2


def test_diagnose_and_show(tmp_path, capsys):
    config = tmp_path / "instance.json"
    config.write_text(
        json.dumps({"name": "cyclic", "subgroup": ["a"], "radius": 8, "n_max": 16, "geometry_radius": 3})
    )
    assert main(["diagnose", "--config", str(config), "--out", str(tmp_path)]) == 0
    assert "consistent with non-amenability" in capsys.readouterr().out
    assert main(["show", str(tmp_path / "cyclic.json")]) == 0
    assert "ExactFree" in capsys.readouterr().out


def test_mode_flag_selects_cheeger_or_delta_mode():
    parser = build_parser()
    greedy = load_config(parser.parse_args(["diagnose", "--gen", "a", "--mode", "greedy"]))
    assert (greedy.mode, greedy.delta_mode) == ("greedy", "exhaustive")
    sampled = load_config(parser.parse_args(["diagnose", "--gen", "a", "--mode", "sampled"]))
    assert (sampled.mode, sampled.delta_mode) == ("exhaustive", "sampled")
