import json
import math
from pathlib import Path

import pandas as pd
import pytest

from src.isl.graph import Graph, Multigraph
from src.isl.load.exporter import read_embedded_config, write_graph
from src.run import main

TESTING = ["--config", "config/testing.yml"]


def _run(capsys: pytest.CaptureFixture, *argv: str) -> tuple:
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_arboricity_of_k5(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    graph = write_graph(Graph.complete(5), tmp_path / "k5.edges")
    out = tmp_path / "arb.json"
    code, stdout = _run(capsys, "arboricity", "--graph", str(graph), "--out", str(out), *TESTING)
    assert code == 0
    assert stdout.strip() == "3"
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["arboricity"] == 3
    assert payload["config"]["subcommand"] == "arboricity"


def test_arboricity_of_a_family_pattern(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "arb.json"
    code, stdout = _run(
        capsys, "arboricity", "--family", "star", "--s", "5", "--out", str(out), *TESTING
    )
    assert code == 0
    assert stdout.strip() == "1"


def test_euler_count_of_k4(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    graph = write_graph(Graph.complete(4), tmp_path / "k4.edges")
    out = tmp_path / "euler.csv"
    code, stdout = _run(
        capsys, "euler-count", "--graph", str(graph), "--connected", "--out", str(out), *TESTING
    )
    assert code == 0
    assert stdout.splitlines() == ["k=3: 4", "k=4: 3"]
    df = pd.read_csv(out, comment="#")
    assert df["count"].tolist() == [1, 0, 0, 4, 3, 0, 0]
    assert df["connected"].tolist()[3:5] == [4, 3]


def test_size_limit_exits_with_three(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    heavy = Multigraph.from_slots(3, [((1, 2), 20), ((2, 3), 10)])
    heavy_path = write_graph(heavy, tmp_path / "h.edges")
    out = tmp_path / "x.csv"
    code, _ = _run(capsys, "euler-count", "--graph", str(heavy_path), "--out", str(out))
    assert code == 3


def test_moments_table(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "moments.csv"
    code, stdout = _run(
        capsys,
        "moments",
        "--m-max",
        "4",
        "--theta",
        "0.02",
        "--s",
        "5",
        "--out",
        str(out),
        *TESTING,
    )
    assert code == 0
    assert "double factorial reading: odd" in stdout
    df = pd.read_csv(out, comment="#")
    assert df["tangent"].tolist() == [1, 2, 16, 272]
    assert df["coefficients"].tolist()[2] == "15 -30 16 0"
    series = json.loads((tmp_path / "moments_series.json").read_text(encoding="utf-8"))
    assert series["series"] == pytest.approx(series["binomial"], rel=1e-12)
    assert series["binomial"] <= series["upper_bound"]


def test_risk_curve_artifact(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "risk.csv"
    argv = [
        "risk-curve",
        "--family",
        "clique",
        "--s",
        "3",
        "--d",
        "6",
        "--n",
        "50",
        "--theta-grid",
        "0:0.2:3",
        "--reps",
        "30",
        "--kappa",
        "4",
        "--out",
        str(out),
        *TESTING,
    ]
    code, stdout = _run(capsys, *argv)
    assert code == 0
    assert len(stdout.splitlines()) == 3

    first = out.read_text(encoding="utf-8").splitlines()[0]
    assert first.startswith("# config: ")
    config = read_embedded_config(out)
    assert config["seed"] == 7
    assert config["theta_grid"] == [0.0, 0.1, 0.2]
    assert config["reps"] == 30

    df = pd.read_csv(out, comment="#")
    assert df["theta"].tolist() == pytest.approx([0.0, 0.1, 0.2])
    assert set(df.columns) >= {"type1", "type2_worst", "total", "kappa", "threshold"}

    before = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == before


def test_bad_grid_exits_with_two(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    code, _ = _run(
        capsys,
        "risk-curve",
        "--family",
        "clique",
        "--s",
        "3",
        "--d",
        "6",
        "--n",
        "50",
        "--theta-grid",
        "0:0.2",
        "--out",
        str(tmp_path / "r.csv"),
        *TESTING,
    )
    assert code == 2


def test_sample_then_scan(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    samples = tmp_path / "spins.islb"
    code, stdout = _run(
        capsys,
        "sample",
        "--family",
        "clique",
        "--s",
        "3",
        "--d",
        "6",
        "--n",
        "200",
        "--theta",
        "0.4",
        "--out",
        str(samples),
        *TESTING,
    )
    assert code == 0
    assert json.loads(stdout)["sampler"] == "exact_enum"

    report = tmp_path / "scan.json"
    code, stdout = _run(
        capsys,
        "scan-test",
        "--family",
        "clique",
        "--s",
        "3",
        "--samples",
        str(samples),
        "--kappa",
        "1",
        "--out",
        str(report),
        *TESTING,
    )
    assert code == 0
    assert stdout.strip() == "1"
    assert json.loads(report.read_text(encoding="utf-8"))["witnesses"] == 20


def test_sq_demo_reports_an_uncovered_run(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    code, stdout = _run(
        capsys,
        "sq-demo",
        "--family",
        "single_edge",
        "--d",
        "8",
        "--n",
        "100",
        "--theta",
        "0.3",
        "--budget",
        "10",
        "--threshold",
        "0.05",
        "--out",
        str(tmp_path / "sq"),
        *TESTING,
    )
    assert code == 0
    summary = json.loads(stdout)
    assert summary["fooled"] is True
    assert summary["risk"] == 1.0
    lines = (tmp_path / "sq" / "transcript.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(lines) == 10


def test_verify_list(capsys: pytest.CaptureFixture) -> None:
    code, stdout = _run(capsys, "verify", "--list", *TESTING)
    assert code == 0
    assert json.loads(stdout)[-1] == "all"


def test_unknown_suite_exits_with_two(capsys: pytest.CaptureFixture) -> None:
    code, _ = _run(capsys, "verify", "lemmas", *TESTING)
    assert code == 2


def test_chisq_table(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "chisq.csv"
    code, stdout = _run(
        capsys,
        "chisq",
        "--family",
        "single_edge",
        "--d",
        "4",
        "--n",
        "2",
        "--theta-grid",
        "0:0.2:3",
        "--enumerated",
        "--out",
        str(out),
        *TESTING,
    )
    assert code == 0
    assert len(stdout.splitlines()) == 3
    assert stdout.splitlines()[0].startswith("theta=0 chi2=")

    df = pd.read_csv(out, comment="#")
    assert list(df.columns) == [
        "theta",
        "n",
        "divergence",
        "risk_lower_bound",
        "divergence_enumerated",
    ]
    assert df["n"].tolist() == [2, 2, 2]
    assert df["divergence"][0] == pytest.approx(0.0, abs=1e-12)
    assert df["risk_lower_bound"][0] == pytest.approx(1.0)
    assert df["divergence"].is_monotonic_increasing
    assert df["divergence"].tolist() == pytest.approx(df["divergence_enumerated"].tolist())
    assert read_embedded_config(out)["subcommand"] == "chisq"


def test_reduce_writes_samples_and_certificate(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    out_dir = tmp_path / "red"
    code, stdout = _run(
        capsys,
        "reduce",
        "--theta",
        "0.02",
        "--s",
        "4",
        "--d",
        "10",
        "--n",
        "40",
        "--eta",
        "0.5",
        "--delta",
        "0.5",
        "--out",
        str(out_dir),
        *TESTING,
    )
    assert code == 0
    assert json.loads(stdout)["sigma"] == pytest.approx(0.02 * math.pi / 0.84)

    assert (out_dir / "pca.csv").exists()
    assert (out_dir / "ising.csv").exists()
    certificate = json.loads((out_dir / "certificate.json").read_text(encoding="utf-8"))
    assert {"theta", "sigma", "bounds", "exact_tv_support", "proxy_accuracy"} <= set(certificate)
    assert 0.0 <= certificate["proxy_accuracy"] <= 1.0
    assert certificate["exact_tv_support"] >= 0.0
    assert certificate["frontier"]["eta"] == 0.5
    assert certificate["frontier"]["theta_by_n"] == pytest.approx(0.5 / 40.0)
    assert certificate["config"]["params"]["delta"] == 0.5


def _sq_demo_config(tmp_path: Path, capsys: pytest.CaptureFixture, *extra: str) -> dict:
    out_dir = tmp_path / "sq"
    code, _ = _run(
        capsys,
        "sq-demo",
        "--family",
        "single_edge",
        "--d",
        "8",
        "--n",
        "100",
        "--theta",
        "0.3",
        "--budget",
        "10",
        "--out",
        str(out_dir),
        *extra,
    )
    assert code == 0
    return read_embedded_config(out_dir / "adversary.json")


def test_sq_demo_kappa_comes_from_oracle_settings(
    tmp_path: Path, capsys: pytest.CaptureFixture
) -> None:
    config = _sq_demo_config(tmp_path, capsys, *TESTING)
    kappa = 1.0 / (4.0 * math.sqrt(2.0))
    assert config["kappa"] == pytest.approx(kappa)
    assert config["params"]["threshold"] == pytest.approx(kappa / 10.0)

    yml = tmp_path / "oracle.yml"
    yml.write_text(
        (Path("config/testing.yml").read_text(encoding="utf-8"))
        .replace("constants:\n  kappa: null", "constants:\n  kappa: 9.0")
        .replace("oracle:\n  xi: 0.05", "oracle:\n  xi: 0.05\n  p: 2.0"),
        encoding="utf-8",
    )
    config = _sq_demo_config(tmp_path, capsys, "--config", str(yml))
    assert config["constants"]["kappa"] == 9.0
    assert config["kappa"] == pytest.approx(1.0 / (6.0 * math.sqrt(2.0)))

    config = _sq_demo_config(tmp_path, capsys, "--kappa", "0.5", *TESTING)
    assert config["kappa"] == 0.5
    assert config["params"]["threshold"] == pytest.approx(1.0 / 32.0)
