"""CLI contract: subcommands, exit codes, deterministic output bytes."""
import json

import pytest

from tgf.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_tables_case2_single_row(capsys):
    code, out, _ = run_cli(capsys, "tables", "--case=2", "--max-n=1")
    assert code == 0
    assert out.splitlines() == ["n,h2norm,xi,eta,zeta,m", "1,4,0,0,0,4"]


def test_tables_case1_row8(capsys):
    code, out, _ = run_cli(capsys, "tables", "--case=1", "--max-n=8")
    assert code == 0
    assert out.splitlines()[8] == "8,400,16,16,16,1144015"


def test_tables_free_zeta_column_zero(capsys):
    code, out, _ = run_cli(capsys, "tables", "--case=free", "--q=2", "--max-n=6")
    assert code == 0
    rows = [line.split(",") for line in out.splitlines()[1:]]
    assert all(row[4] == "0" for row in rows)


def test_tables_deterministic_across_threads(capsys, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["tables", "--case=2", "--max-n=7", "--threads=1", f"--out={out1}"]) == 0
    assert main(["tables", "--case=2", "--max-n=7", "--threads=3", f"--out={out2}"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_tables_custom_words(capsys):
    # Y = {A, B} in F exercises word parsing and the q = 1 path
    code, out, _ = run_cli(capsys, "tables", "--case=custom", "--words=A,B", "--max-n=4")
    assert code == 0
    assert out.splitlines()[1].startswith("1,2,")


def test_norm_free_moments(capsys):
    code, out, _ = run_cli(capsys, "norm", "--free", "--q=2", "--order=40")
    assert code == 0
    lams = [float(line.split(",")[3]) for line in out.splitlines()[1:41]]
    assert all(b > a for a, b in zip(lams, lams[1:]))
    assert lams[-1] < 2 * 2**0.5  # monotone toward 2 sqrt 2 from below


def test_usage_errors_exit_1(capsys):
    assert run_cli(capsys, "tables", "--case=nope")[0] == 1
    assert run_cli(capsys, "tables", "--case=custom")[0] == 1
    assert run_cli(capsys, "norm")[0] == 1
    assert run_cli(capsys, "density", "--case=1", "--order=40")[0] == 1


def test_argparse_usage_exit_code():
    with pytest.raises(SystemExit) as info:
        main(["tables", "--max-n"])  # missing value
    assert info.value.code == 1


def test_norm_case1_fixture(capsys, tmp_path):
    out = tmp_path / "bounds.csv"
    code, stdout, _ = run_cli(
        capsys, "norm", "--case=1", "--order=12", f"--out={out}"
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[12].startswith("12,2.48403,2.69756,2.78200,1.44610,2.86343")
    # lambda_max(M_12) has not yet crossed 2 sqrt 2, so gamma is undefined
    assert "# gamma undefined" in stdout


def test_norm_gamma_defined_at_full_depth(capsys):
    code, out, _ = run_cli(capsys, "norm", "--case=1")
    assert code == 0
    gamma_line = [l for l in out.splitlines() if "gamma from best" in l][0]
    assert gamma_line.endswith("1.66996")


def test_norm_moments_file(capsys, tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("".join(f"{n} {m}\n" for n, m in
                            [(1, 3), (2, 15), (3, 87), (4, 543)]))
    code, out, _ = run_cli(capsys, "norm", f"--moments={path}")
    assert code == 0
    assert out.splitlines()[0] == "n,root_moment,ratio_root,lambda_max,alpha,alpha_sum"
    assert out.splitlines()[1].startswith("1,1.73205,")


def test_norm_fit_window(capsys):
    code, out, _ = run_cli(capsys, "norm", "--case=2", "--order=24",
                           "--fit-window=8:24")
    assert code == 0
    fit_line = [l for l in out.splitlines() if l.startswith("# fit")][0]
    assert "a=3.870" in fit_line
    assert "residual=" in fit_line


def test_norm_degenerate_moments_exit_3(capsys, tmp_path):
    path = tmp_path / "m.txt"
    path.write_text("1 1\n2 1\n3 1\n")  # two-point measure: finite support
    code, out, err = run_cli(capsys, "norm", f"--moments={path}")
    assert code == 3
    assert "degenerate" in err


def test_density_files(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run_cli(capsys, "density", "--case=1", "--order=8",
                           "--range=0:3", "--out=d")
    assert code == 0
    rho = (tmp_path / "d-rho8.csv").read_text().splitlines()
    assert rho[1] == "t,rho"
    assert len(rho) == 2 + 301
    assert (tmp_path / "d-free.csv").exists()


def test_density_full_order_grid(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run_cli(capsys, "density", "--case=1", "--order=37",
                           "--range=0:3", "--out=full")
    assert code == 0
    lines = (tmp_path / "full-rho37.csv").read_text().splitlines()
    assert len(lines) == 2 + 301  # label, header, 301 grid rows at step 0.01


def test_tables_verification_failure_exits_2(capsys, monkeypatch):
    import tgf.cli as cli_mod
    from tgf.sequences import VerifyReport

    def fake_verify(table, torsion_free=True):
        report = VerifyReport()
        report.add("moebius_n2", False, "injected")
        return report

    monkeypatch.setattr(cli_mod, "moebius_verify", fake_verify)
    code, out, err = run_cli(capsys, "tables", "--case=1", "--max-n=3")
    assert code == 2
    assert "verification failed" in err


def test_density_tail_files(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run_cli(capsys, "density", "--case=2", "--order=6", "--tail",
                           "--range=3.464:4", "--step=0.01", "--out=t")
    assert code == 0
    names = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert names == ["t-rho5.csv", "t-rho6.csv", "t-tail-avg.csv"]


def test_density_free_curve(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run_cli(capsys, "density", "--free", "--q=2",
                           "--range=-2.83:2.83", "--out=f")
    assert code == 0
    lines = (tmp_path / "f-free-q2.csv").read_text().splitlines()
    assert lines[1] == "t,rho"
    assert len(lines) == 2 + 567


def test_verify_small_case1(capsys):
    code, out, _ = run_cli(capsys, "verify", "--case=1", "--max-n=6",
                           "--brute-max-n=3")
    assert code == 0
    payload = json.loads(out)
    assert payload["ok"] is True
    names = {c["name"] for c in payload["checks"]}
    assert "brute_force_equivalence" in names
    assert "transform_roundtrips" in names
    assert any(row["divisible_by_2n"] for row in payload["moebius"])


def test_verify_lattice(capsys):
    code, out, _ = run_cli(capsys, "verify", "--case=lattice", "--d=2",
                           "--max-n=6", "--brute-max-n=3")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_threads_env_default(capsys, monkeypatch):
    monkeypatch.setenv("TGF_THREADS", "2")
    code, out, _ = run_cli(capsys, "tables", "--case=1", "--max-n=5")
    assert code == 0
    monkeypatch.setenv("TGF_THREADS", "zebra")
    assert run_cli(capsys, "tables", "--case=1", "--max-n=5")[0] == 1
