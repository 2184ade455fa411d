from fractions import Fraction
from importlib import resources

import pytest

from wflpebble.certificate import parse_certificate, wfl_ratio
from wflpebble.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, EXIT_USAGE, fmt_q, main, render
from wflpebble.graph import parse_graph


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fixture_text(name):
    return resources.files("wflpebble").joinpath("data", name).read_text()


def test_fmt_q():
    assert fmt_q(Fraction(117, 4)) == "29.25"
    assert fmt_q(Fraction(133, 5)) == "26.6"
    assert fmt_q(Fraction(236, 7)) == "236/7"
    assert fmt_q(12) == "12" and fmt_q(Fraction(-1, 2)) == "-0.5" and fmt_q(None) == "-"
    assert fmt_q(Fraction(481, 16)) == "30.0625"


def test_render_formats():
    rows = [["a", Fraction(1, 2), None]]
    assert render(["x", "y", "z"], rows, "tsv") == "x\ty\tz\na\t0.5\t-"
    assert render(["x", "y", "z"], rows, "records") == "x=a y=0.5 z=-"
    table = render(["x", "y", "z"], rows, None).splitlines()
    assert table[0].split() == ["x", "y", "z"] and table[2].split() == ["a", "0.5", "-"]


def test_tables_check(capsys):
    code, out, _ = run(capsys, "tables", "--check")
    assert code == EXIT_OK
    assert "check: ok" in out
    assert "29.25" in out and "26.6" in out and "28.2" in out


def test_tables_flower_sizes(capsys):
    code, out, _ = run(capsys, "tables", "flower", "--m", "9", "--check", "--tsv")
    assert code == EXIT_OK
    # J_9 z_0: 3/2 * 2^6 + 8 - 2 = 102
    assert "z_0\t102\t" in out


def test_gen_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "flower5")
    assert code == EXIT_OK
    g = parse_graph(out)
    assert g.n == 20 and g.name == "flower5"
    target = tmp_path / "j5.graph"
    assert run(capsys, "gen", "flower5", "--out", str(target))[0] == EXIT_OK
    assert parse_graph(target.read_text()) == g


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--graph", "blanusa2", "--format", "records")
    assert code == EXIT_OK
    lines = [l for l in out.splitlines() if l.startswith("target=")]
    assert len(lines) == 6 and all("lambda_lower=22" in l for l in lines)


def test_validate(capsys, tmp_path):
    path = tmp_path / "b2.cert"
    path.write_text(fixture_text("blanusa2_x_1.cert"))
    code, out, _ = run(capsys, "validate", str(path), "--surplus")
    assert code == EXIT_OK
    assert "lambda 29.25" in out and "pi <= 30" in out and "lambda lower bound 22" in out


def test_validate_corrupted(capsys, tmp_path):
    text = fixture_text("petersen_a_1.cert")
    # double one leaf weight so it exceeds half its parent
    lines = text.splitlines()
    i = max(j for j, l in enumerate(lines) if l.strip().startswith("weight") and l.split()[-1] == "1")
    parts = lines[i].split()
    lines[i] = lines[i].replace(f"{parts[1]} 1", f"{parts[1]} 3")
    path = tmp_path / "bad.cert"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "validate", str(path))
    assert code == EXIT_FAIL and "INVALID" in out and "halving" in out


def test_validate_usage_errors(capsys, tmp_path):
    path = tmp_path / "x.cert"
    path.write_text(fixture_text("petersen_a_1.cert").replace("graph petersen", "graph missing.graph"))
    assert run(capsys, "validate", str(path))[0] == EXIT_USAGE
    assert run(capsys, "validate", str(tmp_path / "nope.cert"))[0] == EXIT_USAGE
    path.write_text(fixture_text("petersen_a_1.cert").replace(" 2\n", " 2/0\n", 1))
    assert run(capsys, "validate", str(path))[0] == EXIT_USAGE


def test_heuristic_emit_then_validate(capsys, tmp_path):
    out_file = tmp_path / "j3.cert"
    code, out, err = run(
        capsys, "heuristic", "--graph", "flower3", "--target", "z_0", "--emit", str(out_file), "--log-decisions"
    )
    assert code == EXIT_OK and "[z_0]" in err
    cert = parse_certificate(out_file.read_text())
    assert wfl_ratio(cert) == 12
    code, out, _ = run(capsys, "validate", str(out_file))
    assert code == EXIT_OK and "lambda 12" in out


def test_heuristic_emit_needs_one_target(capsys, tmp_path):
    code, _, err = run(capsys, "heuristic", "--graph", "petersen", "--all-targets", "--emit", str(tmp_path / "p.cert"))
    assert code == EXIT_USAGE and "exactly one target" in err


def test_heuristic_unreachable_is_usage_error(capsys, tmp_path):
    g = tmp_path / "pendant.graph"
    g.write_text("graph pendant\nvertices l r a b\nedge l r\nedge r a\nedge a b\n")
    assert run(capsys, "heuristic", "--graph", str(g), "--target", "r")[0] == EXIT_USAGE


def test_exact(capsys):
    code, out, _ = run(capsys, "exact", "--graph", "petersen", "--tsv")
    assert code == EXIT_OK
    assert out.splitlines()[1].split("\t")[:2] == ["a_1", "10"]
    assert "# pi over these targets: 10" in out


def test_exact_budget(capsys):
    code, _, err = run(capsys, "exact", "--graph", "petersen", "--max-states", "5")
    assert code == EXIT_BUDGET and "budget" in err
    assert run(capsys, "exact", "--graph", "flower5")[0] == EXIT_BUDGET


def test_lemma_check(capsys, tmp_path):
    path = tmp_path / "c4.cert"
    path.write_text(fixture_text("cube2_00.cert"))
    code, out, _ = run(capsys, "lemma-check", "--certificate", str(path))
    assert code == EXIT_OK and "mode exhaustive" in out and "violations 0" in out
    code, _, err = run(capsys, "lemma-check", "--certificate", str(path), "--samples", "10")
    assert code == EXIT_USAGE and "--rng-seed" in err
    code, out, _ = run(capsys, "lemma-check", "--certificate", str(path), "--samples", "50", "--rng-seed", "4")
    assert code == EXIT_OK and "mode sampled" in out and "configurations 50" in out


def test_pipeline(capsys):
    code, out, _ = run(capsys, "pipeline", "--graph", "petersen", "--format", "records")
    assert code == EXIT_OK
    assert "best_lambda=9" in out and "pi_upper=10" in out and "exact_pi=10" in out
    code, out, _ = run(capsys, "pipeline", "--graph", "flower5", "--no-exact", "--target", "z_0")
    assert code == EXIT_OK and "26" in out


def test_unknown_graph(capsys):
    assert run(capsys, "bounds", "--graph", "goldberg5")[0] == EXIT_USAGE


def test_parser_rejects_bad_invocations(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
