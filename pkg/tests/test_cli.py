import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from modeclust import cli, dataset


@pytest.fixture(scope="module")
def blobs(tmp_path_factory):
    rng = np.random.default_rng(5)
    centers = np.array([[0.0, 0.0], [4.0, 0.0], [2.0, 3.5]])
    lab = np.repeat([0, 1, 2], 60)
    x = centers[lab] + 0.5 * rng.normal(size=(180, 2))
    path = tmp_path_factory.mktemp("data") / "blobs.csv"
    dataset.write_csv(path, x, [f"class{c}" for c in lab], ("a", "b"), label_column="truth")
    return path


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_cluster_soft_connect_viz_eval(blobs, tmp_path, capsys):
    clusters = tmp_path / "clusters.json"
    assert run("cluster", "--input", blobs, "--label-col", "truth", "--out", clusters) == 0
    doc = json.loads(clusters.read_text())
    assert doc["k"] == 3 and len(doc["labels"]) == 180
    assert {"h", "n0", "modes", "sizes"} <= set(doc)

    soft = tmp_path / "soft.csv"
    assert run("soft", "--input", blobs, "--label-col", "truth", "--clusters", clusters, "--out", soft) == 0
    rows = list(csv.reader(soft.open()))
    a = np.array(rows[1:], dtype=float)
    assert a.shape == (180, 3)
    np.testing.assert_allclose(a.sum(axis=1), 1.0, atol=1e-5)

    omega, edges = tmp_path / "omega.csv", tmp_path / "edges.json"
    assert run("connect", "--soft", soft, "--clusters", clusters, "--csv", omega, "--edges", edges) == 0
    om = np.array(list(csv.reader(omega.open()))[1:], dtype=float)
    np.testing.assert_allclose(om, om.T)
    assert isinstance(json.loads(edges.read_text()), list)

    svg, lay = tmp_path / "layout.svg", tmp_path / "layout.json"
    assert run("viz", "--input", blobs, "--label-col", "truth", "--clusters", clusters,
               "--omega", omega, "--svg", svg, "--json", lay, "--color-by", "label") == 0
    assert svg.read_text().rstrip().endswith("</svg>")
    assert len(json.loads(lay.read_text())["point_xy"]) == 180

    capsys.readouterr()
    assert run("eval", "--input", blobs, "--label-col", "truth", "--clusters", clusters) == 0
    out = capsys.readouterr().out
    assert "class0" in out
    ari = float(out.strip().splitlines()[-1].split("=")[1])
    assert ari > 0.9


def test_scplot(blobs, tmp_path):
    csv_path, svg = tmp_path / "sc.csv", tmp_path / "sc.svg"
    assert run("scplot", "--input", blobs, "--label-col", "truth", "--csv", csv_path, "--svg", svg) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "rank,size"
    sizes = [int(l.split(",")[1]) for l in lines[1:]]
    assert sizes == sorted(sizes, reverse=True) and sum(sizes) == 180
    assert 'class="threshold"' in svg.read_text()


def test_synth_writes_csv(tmp_path):
    out = tmp_path / "two.csv"
    assert run("synth", "--which", "two_gaussian_1d", "--seed", 3, "--n", 40, "--out", out) == 0
    dm = dataset.load_csv(out, "label")
    assert dm.n == 40 and dm.d == 1


def test_run_and_rerun_bit_identical(tmp_path):
    first = tmp_path / "first"
    assert run("run", "--synth", "two_gaussian_1d", "--seed", 2, "--out", first) == 0
    names = {p.name for p in first.iterdir()}
    assert {"labels.json", "modes.json", "soft.csv", "omega.csv", "edges.json",
            "scplot.csv", "scplot.svg", "layout.svg", "layout.json", "manifest.json"} <= names
    manifest = json.loads((first / "manifest.json").read_text())
    assert manifest["result"]["k"] == 2
    assert "exact" in manifest and "versions" in manifest

    second = tmp_path / "second"
    assert run("run", "--from-manifest", first / "manifest.json", "--out", second) == 0
    for name in ("labels.json", "modes.json", "soft.csv", "omega.csv", "edges.json", "layout.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_exit_codes(tmp_path, blobs, capsys):
    assert run("cluster", "--input", tmp_path / "missing.csv") == 4
    bad = tmp_path / "const.csv"
    bad.write_text("a,b\n1,2\n1,3\n1,4\n")
    assert run("cluster", "--input", bad) == 2
    assert "error" in capsys.readouterr().err
    assert run("eval", "--input", blobs, "--clusters", tmp_path / "nope.json") in (2, 4)
    assert run("run", "--synth", "two_gaussian_1d", "--out", tmp_path / "x") == 2


def test_failed_run_leaves_no_partial_output(tmp_path):
    bad = tmp_path / "const.csv"
    bad.write_text("a,b\n1,2\n1,3\n1,4\n")
    out = tmp_path / "out"
    assert run("run", "--input", bad, "--out", out) == 2
    assert not out.exists() or not any(out.iterdir())


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "modeclust", "--threads", "1", "synth",
                           "--which", "two_gaussian_1d", "--seed", "0", "--n", "5"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[0].endswith("label")
    assert len(proc.stdout.splitlines()) == 6
