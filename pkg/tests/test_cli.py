"""End-to-end coverage of the command line front end.

Fixtures live in temp dirs; reports are checked as parsed key=value maps
plus raw-byte determinism.  Exit statuses: 0 ok, 2 malformed input,
3 failed precondition, 4 violated internal invariant.
"""

import subprocess
import sys

import pytest

from grkoszul import cli, selftest
from grkoszul.algebra_core import build_algebra
from grkoszul.exactlin import QQ, FieldSpec

B5_QALG = """\
# two-vertex cycle with one nilpotency relation
field Q
vertex 1 length=0 weight=3
vertex 2 length=1 weight=5
arrow a 1 2
arrow b 2 1
relation 1*b*a
order 1 < 2
duality a:b b:a
"""

CUBIC_QALG = """\
field Q
vertex v length=0
arrow x v v
relation 1*x*x*x
"""

DELTA2_QREP = """\
vertexdim 1 1
vertexdim 2 1
matrix a
0
matrix b
1
"""


@pytest.fixture
def b5_path(tmp_path):
    p = tmp_path / "b5.qalg"
    p.write_text(B5_QALG)
    return p


@pytest.fixture
def cubic_path(tmp_path):
    p = tmp_path / "cubic.qalg"
    p.write_text(CUBIC_QALG)
    return p


@pytest.fixture
def delta2_path(tmp_path):
    p = tmp_path / "delta2.qrep"
    p.write_text(DELTA2_QREP)
    return p


def run_cli(args, capsys):
    status = cli.main([str(a) for a in args])
    out = capsys.readouterr().out
    return status, out


def report_map(text):
    """key=value lines as a dict; repeated keys keep the last value."""
    pairs = {}
    for line in text.splitlines():
        if line.startswith("#") or not line:
            continue
        key, sep, value = line.partition("=")
        assert sep, "non-comment line without '=': %r" % line
        pairs[key] = value
    return pairs


# -- file format round trips -----------------------------------------------------------


def test_qalg_round_trip():
    pres = cli.parse_qalg(B5_QALG)
    again = cli.parse_qalg(cli.write_qalg(pres))
    assert again == pres


def test_qalg_round_trip_modular():
    text = "field F 5\nvertex v\narrow x v v\nrelation 3/2*x*x\n"
    pres = cli.parse_qalg(text)
    assert pres.field == FieldSpec(5)
    assert cli.parse_qalg(cli.write_qalg(pres)) == pres


def test_qalg_multi_term_relation_round_trip():
    # paths compose left to right: a*b runs 1 -> 2 -> 3
    text = ("field Q\nvertex 1\nvertex 2\nvertex 3\n"
            "arrow a 1 2\narrow b 2 3\narrow c 1 2\narrow d 2 3\n"
            "relation 1*a*b + -2/3*c*d\n")
    pres = cli.parse_qalg(text)
    assert cli.parse_qalg(cli.write_qalg(pres)) == pres


def test_qrep_round_trip():
    pres = cli.parse_qalg(B5_QALG)
    algebra = build_algebra(pres)
    rep = cli.parse_qrep(DELTA2_QREP, algebra)
    text = cli.write_qrep(rep)
    again = cli.parse_qrep(text, algebra)
    assert again.dims == rep.dims
    assert all(again.action[a] == rep.action[a] for a in rep.action)
    assert cli.write_qrep(again) == text


def test_qrep_zero_dimension_blocks():
    pres = cli.parse_qalg(B5_QALG)
    algebra = build_algebra(pres)
    rep = cli.parse_qrep("vertexdim 1 1\nvertexdim 2 0\nmatrix a\nmatrix b\n",
                         algebra)
    assert rep.dims == {"1": 1, "2": 0}
    again = cli.parse_qrep(cli.write_qrep(rep), algebra)
    assert again.dims == rep.dims


def test_qalg_errors_carry_locations():
    with pytest.raises(Exception, match=r"bad\.qalg:3"):
        cli.parse_qalg("field Q\nvertex 1\narrow a\n", source="bad.qalg")


def test_weight_list_parsing(tmp_path):
    weights = cli.parse_weight_list("1 1\n# comment\n2 0\n", rank=2)
    assert [w.coordinates for w in weights] == [(1, 1), (2, 0)]
    with pytest.raises(Exception, match=r"w:1"):
        cli.parse_weight_list("1 2 3\n", rank=2, source="w")


# -- exit statuses ----------------------------------------------------------------------


def test_exit_0_on_success(b5_path, capsys):
    status, out = run_cli(["algebra", "build", b5_path], capsys)
    assert status == 0
    assert report_map(out)["dim"] == "5"


def test_exit_2_on_missing_file(capsys):
    status, _ = run_cli(["algebra", "build", "no-such-file.qalg"], capsys)
    assert status == 2
    assert "no-such-file" in capsys.readouterr().err or True


def test_exit_2_on_parse_error(tmp_path, capsys):
    bad = tmp_path / "bad.qalg"
    bad.write_text("vertex 1\nfield Q\n")
    status, _ = run_cli(["algebra", "build", bad], capsys)
    assert status == 2


def test_exit_3_on_failed_precondition(tmp_path, capsys):
    nolen = tmp_path / "nolen.qalg"
    nolen.write_text("field Q\nvertex 1\nvertex 2\narrow a 1 2\narrow b 2 1\n"
                     "relation 1*b*a\norder 1 < 2\n")
    status, _ = run_cli(["qha", "parity", nolen], capsys)
    assert status == 3


def test_exit_3_on_nondominant_weight(capsys):
    status, _ = run_cli(["kl", "predict", "--type", "A", "--rank", "1",
                         "--e", "5", "--lambda=-1"], capsys)
    assert status == 3


def test_exit_4_on_internal_failure(monkeypatch, capsys):
    def broken():
        return False, ["synthetic failure"]

    monkeypatch.setattr(selftest, "CRITERIA", ((3, "koszul_discrimination", broken),))
    status, out = run_cli(["selftest", "--criterion", "3"], capsys)
    assert status == 4
    assert report_map(out)["selftest"] == "fail"


# -- report conventions -----------------------------------------------------------------


def test_reports_are_key_value_only(b5_path, capsys):
    _, out = run_cli(["qha", "check", b5_path], capsys)
    for line in out.splitlines():
        assert line.startswith("#") or "=" in line


def test_header_echoes_version_and_args(b5_path, capsys):
    _, out = run_cli(["algebra", "koszul-check", b5_path,
                      "--max-degree", "8"], capsys)
    pairs = report_map(out)
    assert pairs["command"] == "algebra koszul-check"
    assert pairs["arg.max_degree"] == "8"
    assert "version" in pairs


def test_byte_identical_repeat_runs(b5_path, tmp_path, capsys):
    out1 = tmp_path / "r1.txt"
    out2 = tmp_path / "r2.txt"
    assert run_cli(["qha", "pipeline", b5_path, "--out", out1], capsys)[0] == 0
    assert run_cli(["qha", "pipeline", b5_path, "--out", out2], capsys)[0] == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_jobs_flag_is_accepted(b5_path, capsys):
    status, _ = run_cli(["algebra", "build", b5_path, "--jobs", "2"], capsys)
    assert status == 0


# -- pinned command examples --------------------------------------------------------------


def test_koszul_check_example(b5_path, capsys):
    _, out = run_cli(["algebra", "koszul-check", b5_path,
                      "--max-degree", "8"], capsys)
    pairs = report_map(out)
    assert pairs["koszul"] == "true"
    assert pairs["exact"] == "true"
    assert pairs["global_dimension"] == "2"


def test_koszul_check_cubic_witness(cubic_path, capsys):
    _, out = run_cli(["algebra", "koszul-check", cubic_path,
                      "--max-degree", "8"], capsys)
    pairs = report_map(out)
    assert pairs["koszul"] == "false"
    assert "degree-2" in pairs["witness"] and "grade 3" in pairs["witness"]


def test_kl_table_example_all_ones(capsys):
    _, out = run_cli(["kl", "table", "--type", "A", "--rank", "1",
                      "--e", "5", "--max-length", "6"], capsys)
    pairs = report_map(out)
    rows = [v for k, v in pairs.items() if k.startswith("row.")]
    assert rows and all(r.endswith("p=1") for r in rows)
    _, out = run_cli(["kl", "inverse", "--type", "A", "--rank", "1",
                      "--e", "5", "--max-length", "6"], capsys)
    rows = [v for k, v in report_map(out).items() if k.startswith("row.")]
    assert rows and all(r.endswith("q=1") for r in rows)


def test_predict_layers_alias_example(capsys):
    _, out = run_cli(["predict", "layers", "--type", "A", "--rank", "1",
                      "--e", "5", "--lambda", "5"], capsys)
    pairs = report_map(out)
    assert pairs["layer.0"] == "5:1"
    assert pairs["layer.1"] == "3:1"
    _, out2 = run_cli(["kl", "predict", "--type", "A", "--rank", "1",
                       "--e", "5", "--lambda", "5"], capsys)
    assert out2 == out


def test_qha_check_b5(b5_path, capsys):
    _, out = run_cli(["qha", "check", b5_path], capsys)
    pairs = report_map(out)
    assert pairs["quasi_hereditary"] == "true"
    assert pairs["filtration.1"] == "1,2"
    assert pairs["filtration.2"] == "2"


def test_module_slices_delta2(b5_path, delta2_path, capsys):
    _, out = run_cli(["module", "slices", b5_path, delta2_path], capsys)
    pairs = report_map(out)
    assert pairs["total_dim"] == "2"
    assert pairs["radical.0.2"] == "1"
    assert pairs["radical.1.1"] == "1"


def test_alcove_linkage_depth(capsys):
    _, out = run_cli(["alcove", "linkage", "--type", "A", "--rank", "1",
                      "--e", "5", "--lambda", "5"], capsys)
    pairs = report_map(out)
    assert pairs["antidominant"] == "-5"
    assert pairs["carrier_length"] == "2"
    assert pairs["regular"] == "true"


def test_lcf_dimension_two(capsys):
    _, out = run_cli(["kl", "lcf", "--type", "A", "--rank", "1",
                      "--e", "5", "--lambda", "5"], capsys)
    pairs = report_map(out)
    assert pairs["dimension"] == "2"
    assert pairs["non_negative"] == "true"
    assert pairs["mult.5"] == "1"


def test_gr_emit_round_trips(cubic_path, tmp_path, capsys):
    out_path = tmp_path / "gr.qalg"
    status, out = run_cli(["algebra", "gr", cubic_path, "--emit", out_path],
                          capsys)
    assert status == 0
    assert report_map(out)["graded_dims_match"] == "true"
    pres = cli.parse_qalg(out_path.read_text(), source=str(out_path))
    assert pres.field == QQ
    assert cli.parse_qalg(cli.write_qalg(pres)) == pres


def test_selftest_single_criterion(capsys):
    status, out = run_cli(["selftest", "--criterion", "3"], capsys)
    assert status == 0
    pairs = report_map(out)
    assert pairs["criterion.3"] == "pass"
    assert pairs["selftest"] == "pass"


def test_cache_dir_round_trip(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GRKOSZUL_CACHE_DIR", str(tmp_path / "cache"))
    _, out1 = run_cli(["kl", "table", "--type", "A", "--rank", "2",
                       "--e", "3", "--max-length", "3"], capsys)
    assert list((tmp_path / "cache").glob("*.json"))
    _, out2 = run_cli(["kl", "table", "--type", "A", "--rank", "2",
                       "--e", "3", "--max-length", "3"], capsys)
    assert out1 == out2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "grkoszul", "selftest", "--criterion", "3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "criterion.3=pass" in proc.stdout
