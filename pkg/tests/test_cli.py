"""Command line interface, exercised in-process through main(argv)."""

import json

import pytest

from mulam.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------- parse ----------


def test_parse_echoes_canonical_form(capsys):
    code, out, _ = _run(capsys, "parse", "-e", r"(\x.  x)   y")
    assert code == 0
    assert out == "lamu: (\\x.x) y\n"


def test_parse_classifies_resource_terms(capsys):
    code, out, _ = _run(capsys, "parse", "-e", "x[y] 1")
    assert code == 0
    assert out.startswith("resource: ")


def test_parse_json_uses_tagged_union(capsys):
    code, out, _ = _run(capsys, "parse", "--json", "-e", "x[y]")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "resource"
    assert doc["value"]["tag"] == "sum"
    assert doc["value"]["addends"][0]["term"]["tag"] == "bagapp"


def test_parse_error_has_caret_and_exit_2(capsys):
    code, out, err = _run(capsys, "parse", "-e", "x )")
    assert code == 2
    assert "^" in err and err.startswith("error:")


# ---------- reduce ----------


def test_reduce_golden_trace_nat_coefficients(capsys):
    src = "(mu 'a.<'a> mu 'e.<'a> x)[y, y]"
    code, out, _ = _run(
        capsys,
        "reduce", "--calculus", "res", "--semiring", "nat",
        "--strategy", "leftmost", "-e", src,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("start:")
    first = lines[1]  # the one mu step that fans out
    assert first.count("+") == 2  # three addends
    assert "2*" in first
    assert lines[-1] == "normal after 5 steps"


def test_reduce_lamu_head_strategy(capsys):
    code, out, _ = _run(
        capsys,
        "reduce", "--calculus", "lamu", "--strategy", "head",
        "-e", r"(\x.x) ((\y.y) z)",
    )
    assert code == 0
    assert "normal for this strategy" in out


def test_reduce_random_is_seed_deterministic(capsys):
    argv = [
        "reduce", "--calculus", "res", "--strategy", "random",
        "--seed", "11", "-e", r"(\x.x[x]) [\y.y, \y.y]",
    ]
    code1, out1, _ = _run(capsys, *argv)
    code2, out2, _ = _run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2


def test_reduce_respects_max_steps(capsys):
    code, out, _ = _run(
        capsys,
        "reduce", "--calculus", "lamu", "--strategy", "leftmost",
        "--max-steps", "3", "-e", r"(\x.x x) (\x.x x)",
    )
    assert code == 0
    assert "stopped after 3 steps (still reducible)" in out


# ---------- normalize ----------


def test_normalize_totals_the_golden_example(capsys):
    code, out, _ = _run(
        capsys,
        "normalize", "--semiring", "nat",
        "-e", "(mu 'a.<'a> mu 'e.<'a> x)[y, y]",
    )
    assert code == 0
    assert out.strip() == "normal form: mu 'a.<'a> x[y,y]"


def test_normalize_rejects_control_terms(capsys):
    code, out, err = _run(capsys, "normalize", "-e", r"\x.x x")
    assert code == 2
    assert "not a resource sum" in err
    assert "reduce --calculus lamu" in err


def test_normalize_accepts_sums_and_bool(capsys):
    code, out, _ = _run(capsys, "normalize", "--semiring", "bool", "-e", "x + 2*x")
    assert code == 0
    assert out.strip() == "normal form: x"


# ---------- measure ----------


def test_measure_reports_all_components(capsys):
    code, out, _ = _run(capsys, "measure", "-e", "mu 'a.<'a> x[mu 'b.<'b> y 1]")
    assert code == 0
    assert "size: 7" in out
    assert "mu degree: 2" in out
    assert "slack multiset: [1, 0]" in out
    assert "layered measure: ([1, 0], 2, 7)" in out


# ---------- taylor / nft ----------


def test_taylor_lists_small_support(capsys):
    code, out, _ = _run(capsys, "taylor", "-e", r"\x.x x", "--max-size", "6")
    assert code == 0
    assert r"\x.x[x]" in out and r"\x.x 1" in out


def test_nft_of_identity_redex(capsys):
    code, out, _ = _run(capsys, "nft", "-e", r"(\x.x) y", "--max-size", "8")
    assert code == 0
    assert out.strip().splitlines()[-1] == "y"


def test_nft_of_looping_term_is_empty(capsys):
    code, out, _ = _run(capsys, "nft", "-e", r"(\x.x x) (\x.x x)", "--max-size", "12")
    assert code == 0
    assert out.strip() == "truncated normal forms (size <= 12): 0"


def test_nft_eq_agrees_and_disagrees(capsys):
    same, _, _ = _run(capsys, "nft-eq", r"(\x.x) y", "y", "--max-size", "8")
    assert same == 0
    diff, out, _ = _run(capsys, "nft-eq", r"\x.\y.x", r"\x.\y.y", "--max-size", "8")
    assert diff == 1
    assert "only left" in out or "only right" in out


# ---------- solvable ----------


def test_solvable_verdicts(capsys):
    code, out, _ = _run(capsys, "solvable", "-e", r"(\x.x) y")
    assert code == 0
    assert out.strip() == "solvable: head normal form after 1 steps: y"
    code, out, _ = _run(capsys, "solvable", "--fuel", "50", "-e", r"(\x.x x) (\x.x x)")
    assert code == 0
    assert out.strip() == "unknown: no head normal form within 50 steps"


# ---------- check ----------


def test_check_counterexamples_passes(capsys):
    code, out, _ = _run(capsys, "check", "--suite", "counterexamples")
    assert code == 0
    assert "failures: 0" in out


def test_check_json_report_shape(capsys):
    code, out, _ = _run(
        capsys,
        "check", "--suite", "support", "--samples", "40", "--json",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["suite"] == "support"
    assert doc["samples"] == 40
    assert doc["failures"] == []


def test_check_node_cap_env_var(capsys, monkeypatch):
    monkeypatch.setenv("MULAM_NODE_CAP", "2")
    code, out, _ = _run(
        capsys,
        "check", "--suite", "confluence", "--samples", "60",
    )
    assert code == 1
    assert "failures:" in out and "failures: 0" not in out


def test_check_node_cap_env_var_must_be_numeric(capsys, monkeypatch):
    monkeypatch.setenv("MULAM_NODE_CAP", "lots")
    code, _, err = _run(capsys, "check", "--suite", "confluence", "--samples", "5")
    assert code == 2
    assert "MULAM_NODE_CAP" in err


def test_check_flag_overrides_env(capsys, monkeypatch):
    monkeypatch.setenv("MULAM_NODE_CAP", "2")
    code, _, _ = _run(
        capsys,
        "check", "--suite", "confluence", "--samples", "60",
        "--node-cap", "50000",
    )
    assert code == 0


# ---------- argparse behaviour ----------


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as e:
        main(["parse", "--frobnicate"])
    assert e.value.code == 2


def test_missing_subcommand_exits_2():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2


def test_stdin_input(capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(r"\x.x"))
    code, out, _ = _run(capsys, "parse", "-")
    assert code == 0
    assert out == "lamu: \\x.x\n"
