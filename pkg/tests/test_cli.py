import subprocess
import sys

import pytest

from robsurf.cli import main

import oracles


@pytest.fixture()
def star_topology(tmp_path):
    path = tmp_path / "star.edges"
    lines = [f"hub leaf{i}" for i in range(1, 6)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def random_topology(tmp_path):
    path = tmp_path / "net.edges"
    links = oracles.gnp_links(16, 0.3, seed=23)
    path.write_text(
        "\n".join(f"v{u} v{v}" for u, v in links) + "\n", encoding="utf-8"
    )
    return path


def test_characterize_output(star_topology, capsys):
    assert main(["characterize", "--topology", str(star_topology)]) == 0
    out = capsys.readouterr().out
    assert "nodes: 6" in out
    assert "links: 5" in out
    assert "max_degree: 5" in out
    assert "assortativity: -1" in out


def test_run_then_replay_byte_identical(random_topology, tmp_path, capsys):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    args = [
        "run",
        "--topology", str(random_topology),
        "--scenario", "node-degree",
        "--pmax", "50",
        "--configs", "4",
        "--seed", "3",
        "--out", str(out1),
        "--heatmap",
        "--workers", "1",
    ]
    assert main(args) == 0
    assert main(
        ["replay", "--manifest", str(out1 / "manifest.json"), "--out", str(out2)]
    ) == 0
    capsys.readouterr()
    for name in ("omega.csv", "pca.json", "heatmap.ppm"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_two_identical_runs_byte_identical(random_topology, tmp_path, capsys):
    outs = [tmp_path / "r1", tmp_path / "r2"]
    for out in outs:
        assert main([
            "run",
            "--topology", str(random_topology),
            "--scenario", "link-random",
            "--pmax", "30",
            "--configs", "5",
            "--seed", "9",
            "--out", str(out),
            "--workers", "2",
        ]) == 0
    capsys.readouterr()
    for name in ("omega.csv", "omega_unsorted.csv", "summary.csv", "pca.json"):
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes()


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.edges"
    bad.write_text("a a\n", encoding="utf-8")
    code = main(["characterize", "--topology", str(bad)])
    assert code == 2
    assert "parse:" in capsys.readouterr().err


def test_missing_file_exit_code(tmp_path, capsys):
    code = main(["characterize", "--topology", str(tmp_path / "nope.edges")])
    assert code == 6
    assert "io:" in capsys.readouterr().err


def test_degenerate_data_exit_code(tmp_path, capsys):
    # on this graph every link betweenness score is distinct, so targeted
    # orders never vary and the covariance collapses to zero
    path = tmp_path / "p.edges"
    links = oracles.gnp_links(18, 0.3, seed=17)
    path.write_text(
        "\n".join(f"v{u} v{v}" for u, v in links) + "\n", encoding="utf-8"
    )
    code = main([
        "run",
        "--topology", str(path),
        "--scenario", "link-bc",
        "--pmax", "10",
        "--configs", "3",
        "--out", str(tmp_path / "out"),
        "--workers", "1",
    ])
    assert code == 4
    assert "degenerate-data:" in capsys.readouterr().err


def test_console_entry_point(star_topology):
    proc = subprocess.run(
        [sys.executable, "-m", "robsurf.cli", "characterize", "--topology",
         str(star_topology)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "nodes: 6" in proc.stdout
