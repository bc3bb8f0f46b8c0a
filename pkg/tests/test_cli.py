import json
import subprocess
import sys

import pytest

from sidforms import make_field
from sidforms.cli import main, parse_system
from sidforms.errors import ParseError

MIXED_SYSTEM = """\
# the 2x5 mixed system over F_5
q 5
rows
 1  0 -1  2 -2
 0  1  2 -1 -2
"""

WITNESS_SET = """\
0 0
0 3
1 2
3 0
3 3
4 0
4 1
4 2
"""


@pytest.fixture
def mixed_files(tmp_path):
    sys_path = tmp_path / "system.txt"
    sys_path.write_text(MIXED_SYSTEM)
    set_path = tmp_path / "set.txt"
    set_path.write_text(WITNESS_SET)
    return str(sys_path), str(set_path)


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def run_json(args, capsys):
    code, out = run_cli(args + ["--json", "--no-timestamp"], capsys)
    return code, json.loads(out)


def test_parse_system(mixed_files):
    system, echo = parse_system(mixed_files[0])
    assert system.field.q == 5
    assert system.m == 2 and system.k == 5
    assert echo["raw_rows"][0] == [1, 0, -1, 2, -2]


def test_parse_prime_power(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("q 4\nrows\n1 1 1 1\n")
    system, echo = parse_system(path)
    assert system.field.p == 2 and system.field.e == 2
    assert echo["modulus"] == [1, 1, 1]  # least irreducible: x^2 + x + 1


def test_parse_errors(tmp_path):
    path = tmp_path / "s.txt"
    path.write_text("q 5\nrows\n1 2 3\n1 2\n")
    with pytest.raises(ParseError) as exc:
        parse_system(path)
    assert exc.value.line == 4
    path.write_text("rows\n1 2 3\n")
    with pytest.raises(ParseError):
        parse_system(path)


def test_classify_command_json(mixed_files, capsys):
    code, doc = run_json(
        ["classify", "--system", mixed_files[0], "--no-witness"], capsys)
    assert code == 0
    assert doc["structure"]["s"] == 4
    assert doc["structure"]["translation_invariant"] is True
    assert doc["verdict"]["sidorenko"] == "no"
    assert doc["verdict"]["common"] == "yes"
    sid_shortest = [
        eq for eq in doc["structure"]["shortest_equations"]
        if _is_sidorenko_f5(eq)
    ]
    assert len(sid_shortest) == 5  # over F_5 every shortest equation pairs


def _is_sidorenko_f5(coeffs):
    from sidforms.classify import sidorenko_single

    return sidorenko_single(make_field(5), coeffs)


def test_classify_require_decision_exit_code(tmp_path, capsys):
    # the additive-quadruple system stays Unknown on the Sidorenko side
    path = tmp_path / "quad.txt"
    path.write_text("q 5\nrows\n1 -1 1 -1 0\n1 2 -1 0 -2\n")
    code, doc = run_json(
        ["classify", "--system", str(path), "--require-decision", "--no-witness"],
        capsys,
    )
    assert code == 2
    assert doc["verdict"]["sidorenko"] == "unknown"


def test_count_command(mixed_files, capsys):
    sys_path, set_path = mixed_files
    code, doc = run_json(
        ["count", "--system", sys_path, "--set", set_path, "--n", "2",
         "--method", "bruteforce"],
        capsys,
    )
    assert code == 0
    assert doc["count"]["count"] == 48
    assert doc["count"]["sidorenko_benchmark"] == "32768/625"
    assert doc["count"]["meets_benchmark"] is False


def test_count_methods_agree(mixed_files, capsys):
    sys_path, set_path = mixed_files
    counts = set()
    for method in ("bruteforce", "kernel", "fourier", "ntt"):
        _, doc = run_json(
            ["count", "--system", sys_path, "--set", set_path, "--n", "2",
             "--method", method],
            capsys,
        )
        counts.add(doc["count"]["count"])
    assert counts == {48}


def test_deficit_command(mixed_files, capsys):
    sys_path, set_path = mixed_files
    code, doc = run_json(
        ["deficit", "--system", sys_path, "--set", set_path, "--n", "2"], capsys)
    assert code == 0
    assert doc["deficits"]["sidorenko_deficit"] == "-2768/9765625"
    assert doc["deficits"]["density"] == "48/15625"


def test_search_report_reverifies_through_deficit(tmp_path, capsys):
    # the witnessed set, fed back through `deficit`, reproduces the
    # reported rational exactly
    sys_path = tmp_path / "sum.txt"
    sys_path.write_text("q 3\nrows\n1 1 1\n")
    out_set = tmp_path / "w.txt"
    code, doc = run_json(
        ["search", "--system", str(sys_path), "--n", "1",
         "--strategy", "anneal", "--steps", "2000", "--seed", "4",
         "--out-set", str(out_set)],
        capsys,
    )
    assert code == 0
    code, check = run_json(
        ["deficit", "--system", str(sys_path), "--set", str(out_set),
         "--n", "1"],
        capsys,
    )
    assert code == 0
    assert check["deficits"]["sidorenko_deficit"] == doc["witness"]["deficit"]


def test_seed_gives_byte_identical_json(mixed_files, capsys):
    sys_path, _ = mixed_files
    outs = []
    for _ in range(2):
        code, out = run_cli(
            ["classify", "--system", sys_path, "--no-witness", "--json",
             "--no-timestamp", "--seed", "5"],
            capsys,
        )
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]


def test_search_command_exhaustive(tmp_path, capsys):
    path = tmp_path / "sum.txt"
    path.write_text("q 3\nrows\n1 1 1\n")
    out_set = tmp_path / "witness.txt"
    code, doc = run_json(
        ["search", "--system", str(path), "--n", "1",
         "--objective", "sidorenko", "--strategy", "exhaustive",
         "--out-set", str(out_set)],
        capsys,
    )
    assert code == 0
    assert doc["witness"]["deficit"] == "-2/27"
    assert doc["witness"]["negative"] is True
    assert out_set.read_text().splitlines()[1:] == ["0", "1"]


def test_search_anneal_seeded(tmp_path, capsys):
    path = tmp_path / "sum.txt"
    path.write_text("q 3\nrows\n1 1 1\n")
    docs = []
    for _ in range(2):
        code, doc = run_json(
            ["search", "--system", str(path), "--n", "1",
             "--strategy", "anneal", "--steps", "500", "--seed", "9"],
            capsys,
        )
        assert code == 0
        docs.append(doc["witness"])
    assert docs[0] == docs[1]
    assert docs[0]["deficit"] == "-2/27"


def test_tau_command(tmp_path, capsys):
    import numpy as np

    from sidforms import build_sign_witness
    from sidforms.knownsystems import ratio_gap_25_f11

    sys_path = tmp_path / "g.txt"
    sys_path.write_text("q 11\nrows\n0 1 -1 2 -2\n1 0 1 1 8\n")
    f = build_sign_witness(ratio_gap_25_f11(), seed=1)
    fn_path = tmp_path / "f.json"
    fn_path.write_text(f.to_json())
    code, doc = run_json(
        ["tau", "--system", str(sys_path), "--function", str(fn_path)], capsys)
    assert code == 0
    assert doc["inputs"]["mean"] == pytest.approx(0.5)
    assert doc["tau"]["sum"][0] < 0
    assert len(doc["tau"]["per_equation"]) == 5


def test_error_exit_code(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("q 6\nrows\n1 1\n")
    code = main(["classify", "--system", str(path)])
    err = capsys.readouterr().err
    assert code == 1
    assert "error" in err


def test_console_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "sidforms.cli", "--version"],
        capture_output=True, text=True,
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "0.1.0"


def test_verify_paper_command(capsys):
    code, doc = run_json(["verify-paper"], capsys)
    assert code == 0
    assert doc["all_passed"] is True
    names = {c["name"] for c in doc["checks"]}
    assert "counterexample-count" in names
    assert "sign-witness-construction" in names
    assert all(c["passed"] for c in doc["checks"])
