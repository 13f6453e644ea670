import io

import pytest

from racgdiv.analysis import parse_csv
from racgdiv.cli import (
    PRESETS, ExperimentConfig, UsageError, apply_overrides, build_parser, experiment_preset,
    main, read_config_file,
)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_word_reduce():
    assert run("word", "reduce", "--graph", "gamma:1", "--word", "a_1 a_0 a_1") == (0, "a_0\n", "")
    assert run("word", "reduce", "--graph", "gamma:1", "--word", "a_0 a_0")[1] == "e\n"


def test_word_geodesic_and_walls():
    assert run("word", "geodesic", "--graph", "gamma:1", "--word", "a_0 a_1 a_0")[1] == "false\n"
    code, out, _ = run("word", "walls", "--graph", "gamma:1", "--word", "a_0 b_0")
    assert code == 0 and out.splitlines() == ["a_0@[a_0]", "b_0@[a_0 b_0 a_0]"]


def test_div_geodesic_zero_radius():
    code, out, _ = run("div", "geodesic", "--graph", "gamma:2", "--geodesic", "periodic",
                       "--word", "a_2 b_2", "--r", "0")
    assert code == 0
    (s,) = parse_csv(out)
    assert s.value == 0


def test_div_pair_and_lower_and_gersten(tmp_path):
    code, out, _ = run("div", "pair", "--graph", "gamma:1", "--alpha", "word:a_0 b_0",
                       "--beta", "word:b_0 a_0", "--r", "1")
    assert code == 0 and parse_csv(out)[0].value == 4
    code, out, _ = run("div", "lower", "--graph", "gamma:3", "--geodesic", "gamma", "--t", "2",
                       "--r", "2", "--window=-3:3")
    assert code == 0 and parse_csv(out)[0].min_t is not None
    dest = tmp_path / "g.csv"
    code, out, _ = run("div", "gersten", "--graph", "gamma:1", "--r-max", "2", "--out", str(dest))
    assert code == 0 and [s.value for s in parse_csv(out)] == [4, 8]
    assert dest.read_text() == out


def test_div_geodesic_emit_dot(tmp_path):
    dot = tmp_path / "p.dot"
    code, _, _ = run("div", "geodesic", "--graph", "gamma:1", "--word", "a_0 b_0", "--r", "1",
                     "--emit-dot", str(dot))
    assert code == 0 and "penwidth" in dot.read_text()


def test_graph_commands(tmp_path):
    path = tmp_path / "g1.txt"
    assert run("graph", "gen", "--graph", "gamma:1", "--out", str(path))[0] == 0
    code, out, _ = run("graph", "validate", str(path))
    assert code == 0 and out.startswith("ok: 4 generators, 4 edges")
    assert run("graph", "dot", "--graph", "omega:2")[1].startswith("graph")
    path.write_text("racg-graph v1\ngen a\nedge a a\n")
    code, _, err = run("graph", "validate", str(path))
    assert code == 1 and "line 3" in err


def test_ball(tmp_path):
    code, out, _ = run("ball", "--graph", "gamma:1", "--R", "2",
                       "--emit-dot", str(tmp_path / "b.dot"))
    assert code == 0 and len(out.splitlines()) == 13


def test_fit_command(tmp_path):
    csv_path = tmp_path / "flat.csv"
    run("div", "geodesic", "--graph", "gamma:1", "--word", "a_0 b_0", "--r-min", "2",
        "--r-max", "5", "--out", str(csv_path))
    code, out, _ = run("fit", str(csv_path), "--expected-exponent", "1")
    assert code == 0 and "slope=1.0000" in out and "PASS" in out


def test_exit_codes():
    assert run("bogus")[0] == 2
    assert run("word", "reduce", "--graph", "gamma:1")[0] == 2
    assert run("word", "reduce", "--graph", "gamma:1", "--word", "zz")[0] == 1
    assert run("word", "reduce", "--graph", "gamma:0", "--word", "a_0")[0] == 1
    assert run("div", "geodesic", "--graph", "gamma:1", "--word", "a_0 b_0")[0] == 2
    assert run("div", "geodesic", "--graph", "gamma:1", "--word", "a_0 b_0", "--r", "3",
               "--cap-radius", "2")[0] == 1


@pytest.mark.parametrize("argv", [
    [], ["graph"], ["graph", "gen"], ["graph", "validate"], ["graph", "dot"], ["word"],
    ["word", "reduce"], ["word", "geodesic"], ["word", "walls"], ["ball"], ["div"],
    ["div", "pair"], ["div", "geodesic"], ["div", "lower"], ["div", "gersten"], ["fit"],
    ["experiment"], ["experiment", "paper-flat"],
])
def test_every_subcommand_has_help(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args(argv + ["--help"])
    assert exc.value.code == 0
    assert "usage:" in capsys.readouterr().out


def test_presets():
    flat = experiment_preset("paper-flat")
    assert (flat.graph, flat.word, flat.r_min, flat.r_max, flat.expected_exponent) == (
        "gamma:1", "a_0 b_0", 1, 8, "1")
    alpha = experiment_preset("paper-alpha", m=2)
    assert (alpha.graph, alpha.word, alpha.expected_exponent) == ("gamma:2", "a_2 b_2", "2")
    gam = experiment_preset("paper-gamma", m=3, t="2")
    assert gam.graph == "gamma:3" and gam.expected_exponent == "5/2"
    assert experiment_preset("paper-gamma", m=4, t="3").expected_exponent == "10/3"
    for name in PRESETS:
        experiment_preset(name).validate()
    with pytest.raises(UsageError):
        experiment_preset("paper-nothing")


def test_config_precedence(tmp_path):
    conf = tmp_path / "c.txt"
    conf.write_text("# overrides\nr_max = 3\nr-min = 2\ncap_nodes = 999999\n")
    values = read_config_file(conf)
    assert values == {"r_max": "3", "r_min": "2", "cap_nodes": "999999"}
    cfg = apply_overrides(experiment_preset("paper-flat"), values)
    assert (cfg.r_min, cfg.r_max, cfg.cap_nodes) == (2, 3, 999999)
    cfg = apply_overrides(cfg, {"r_max": 4, "tol": None})
    assert cfg.r_max == 4 and cfg.tol == 0.5
    with pytest.raises(UsageError):
        apply_overrides(ExperimentConfig(), {"nonsense": "1"})
    out = tmp_path / "out"
    code, text, _ = run("experiment", "paper-flat", "--config", str(conf), "--r-max", "5",
                        "--out", str(out))
    assert code == 0
    assert "# r_min = 2" in text and "# r_max = 5" in text
    assert [s.r for s in parse_csv((out / "paper-flat.csv").read_text())] == [2, 3, 4, 5]


def test_experiment_alpha(tmp_path):
    code, text, _ = run("experiment", "paper-alpha", "--m", "2", "--r-max", "8",
                        "--out", str(tmp_path))
    assert code == 0
    report = (tmp_path / "paper-alpha.report.txt").read_text()
    assert report == text
    assert "exponent: PASS" in report
    samples = parse_csv((tmp_path / "paper-alpha.csv").read_text())
    assert [s.value for s in samples] == [6, 16, 30, 48, 70, 96, 126, 160]


def test_experiment_freeproduct(tmp_path):
    code, text, _ = run("experiment", "paper-freeproduct", "--r-max", "3", "--out", str(tmp_path))
    assert code == 0 and "-> equal" in text


def test_experiment_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run("experiment", "paper-flat", "--r-max", "4", "--out", str(a))
    run("experiment", "paper-flat", "--r-max", "4", "--out", str(b), "--workers", "2")
    assert (a / "paper-flat.csv").read_bytes() == (b / "paper-flat.csv").read_bytes()
