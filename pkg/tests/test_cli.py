"""Command line contract: resolved-config headers, reproducible bodies,
and the documented exit codes."""

import json

import pytest

from halfcos import cli
from halfcos.corpus import corpus
from halfcos.grids import fft_workers


def run(capsys, argv):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_testfns_lists_the_corpus(capsys):
    rc, out, _ = run(capsys, ["testfns", "list"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0].startswith("# config: cmd=testfns")
    assert lines[1] == "name,d,integral,tag"
    assert len(lines) == 2 + len(corpus())
    names = {line.split(",")[0] for line in lines[2:]}
    assert {"kink1", "kink2", "bspline4_2", "gibbs", "exp3"} <= names


def test_identities_residuals_are_tiny(capsys):
    rc, out, _ = run(capsys, ["identities", "--d", "1", "--seed", "3",
                              "--funcs", "3"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "identity,max_rel_residual"
    assert len(lines) == 8
    for line in lines[2:]:
        name, residual = line.split(",")
        assert float(residual) < 1e-10, name


def test_config_header_reflects_resolution(tmp_path, capsys):
    cfgfile = tmp_path / "run.json"
    cfgfile.write_text(json.dumps({"d": 2, "funcs": 2}))
    rc, out, _ = run(capsys, ["identities", "--config", str(cfgfile),
                              "--seed", "5"])
    assert rc == 0
    head = out.split("\n")[0]
    assert "cmd=identities" in head
    assert "d=2" in head and "funcs=2" in head and "seed=5" in head
    # explicit flags override the file
    rc, out, _ = run(capsys, ["identities", "--config", str(cfgfile),
                              "--seed", "5", "--d", "1"])
    assert rc == 0 and "d=1" in out.split("\n")[0]


def test_config_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"nonsense": 1}')
    rc, _, err = run(capsys, ["identities", "--config", str(bad), "--seed", "1"])
    assert rc == 2 and "nonsense" in err
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    rc, _, err = run(capsys, ["identities", "--config", str(broken), "--seed", "1"])
    assert rc == 2
    rc, _, err = run(capsys, ["identities", "--config", str(tmp_path / "none.json"),
                              "--seed", "1"])
    assert rc == 2


def test_randomized_paths_demand_a_seed(capsys):
    rc, _, err = run(capsys, ["identities"])
    assert rc == 2 and "--seed is mandatory" in err
    rc, _, err = run(capsys, ["recover", "--fn", "bspline2_1"])
    assert rc == 2 and "--seed is mandatory" in err
    rc, _, err = run(capsys, ["cubature", "--fn", "exp2", "--shifts", "2"])
    assert rc == 2 and "--seed is mandatory" in err


def test_unknown_function_is_a_config_error(capsys):
    rc, _, err = run(capsys, ["norms", "--fn", "nosuch"])
    assert rc == 2 and "nosuch" in err and "testfns" in err
    rc, _, err = run(capsys, ["norms"])
    assert rc == 2 and "--fn" in err


def test_bad_compare_and_wrong_rule_dimension(capsys):
    rc, _, err = run(capsys, ["norms", "--fn", "kink1", "--compare", "cw,bogus"])
    assert rc == 2 and "bogus" in err
    rc, _, err = run(capsys, ["cubature", "--fn", "kink1", "--rule", "fibonacci"])
    assert rc == 2 and "two-dimensional" in err
    rc, _, err = run(capsys, ["coeffs", "--fn", "kink2", "--mode", "gibbs"])
    assert rc == 2 and "univariate" in err


def test_divergent_tail_exits_three(capsys):
    rc, _, err = run(capsys, ["norms", "--fn", "kink1", "--r", "2.5",
                              "--strict", "--compare", "hpc"])
    assert rc == 3 and "numerical precondition" in err


def test_norms_table_and_ratios(capsys):
    rc, out, _ = run(capsys, ["norms", "--fn", "bspline2", "--r", "1.5",
                              "--p", "2", "--q", "2"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "norm_kind,r,p,q,J_max,value,tail_bound"
    kinds = [line.split(",")[0] for line in lines[2:5]]
    assert kinds == ["cw-seq", "diff", "hpc"]
    ratios = [line for line in lines if line.startswith("# ratio")]
    assert len(ratios) == 2


def test_cubature_table_with_slope_trailer(capsys):
    rc, out, _ = run(capsys, ["cubature", "--fn", "kink1", "--rule", "net",
                              "--nmin", "3", "--nmax", "8", "--tent"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "n,error,log2n,log2err"
    ns = [int(line.split(",")[0]) for line in lines[2:8]]
    assert ns == [8, 16, 32, 64, 128, 256]
    assert lines[-2].startswith("# slope = ")
    assert lines[-1].startswith("# intercept = ")


def test_approx_table(capsys):
    rc, out, _ = run(capsys, ["approx", "--fn", "monomial1",
                              "--N-list", "2,4,8,16", "--kmax", "256"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "n,error,log2n,log2err"
    assert len([l for l in lines if not l.startswith("#")]) == 5
    slope = float(lines[-2].split("=")[1])
    assert -1.8 < slope < -1.2


def test_recover_row(capsys):
    rc, out, _ = run(capsys, ["recover", "--fn", "bspline2_1", "--N", "4",
                              "--seed", "2", "--grid-level", "9"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "N,dim,samples,ls_error,projection_error,condition,normal_residual"
    fields = lines[2].split(",")
    assert int(fields[0]) == 4 and int(fields[1]) == 4
    assert float(fields[3]) > 0.0 and float(fields[5]) > 1.0


def test_coeffs_decay_and_gibbs_modes(capsys):
    rc, out, _ = run(capsys, ["coeffs", "--fn", "exp1", "--kmax", "8"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "k_1,weighted_abs_coef"
    assert len(lines) == 2 + 9
    rc, out, _ = run(capsys, ["coeffs", "--fn", "gibbs", "--mode", "gibbs",
                              "--kmax", "4"])
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[1] == "k,abs_sine_coef_k,abs_hpc_coef_k2"
    first = lines[2].split(",")
    assert float(first[1]) == pytest.approx(0.3183098, abs=1e-4)


def test_reruns_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["recover", "--fn", "bspline2_1", "--N", "4", "--seed", "11",
            "--grid-level", "9"]
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    assert cli.main(["recover", "--fn", "bspline2_1", "--N", "4", "--seed", "12",
                     "--grid-level", "9", "--out", str(c)]) == 0
    assert c.read_bytes() != a.read_bytes()


def test_gnuplot_companion(tmp_path, capsys):
    out = tmp_path / "rate.csv"
    rc = cli.main(["approx", "--fn", "monomial1", "--N-list", "2,4,8",
                   "--kmax", "64", "--out", str(out), "--gnuplot"])
    capsys.readouterr()
    assert rc == 0
    script = (tmp_path / "rate.csv.gp").read_text()
    assert f"plot '{out}' using 1:2" in script
    assert "set logscale xy" in script
    rc, _, err = run(capsys, ["approx", "--fn", "monomial1", "--N-list", "2,4,8",
                              "--kmax", "64", "--gnuplot"])
    assert rc == 2 and "--gnuplot needs --out" in err


def test_fft_worker_cap(monkeypatch):
    monkeypatch.delenv("HPC_BESOV_THREADS", raising=False)
    assert fft_workers() == 1
    monkeypatch.setenv("HPC_BESOV_THREADS", "4")
    assert fft_workers() == 4
    monkeypatch.setenv("HPC_BESOV_THREADS", "junk")
    assert fft_workers() == 1
    monkeypatch.setenv("HPC_BESOV_THREADS", "-2")
    assert fft_workers() == 1


def test_testfns_rejects_unknown_action(capsys):
    rc, _, err = run(capsys, ["testfns", "dump"])
    assert rc == 2
