import json

import numpy as np
import pytest

from curvedirac import io


def test_csv_roundtrip(tmp_path):
    cols = {"t": np.linspace(0, 1, 5), "l": np.arange(5), "flag": np.array([True, False] * 2 + [True])}
    p = io.write_csv(cols, tmp_path / "a.csv")
    text = p.read_bytes()
    assert b"\r" not in text
    lines = text.decode().splitlines()
    assert lines[0] == "t,l,flag"
    assert lines[1] == "0.000000000000e+00,0,1"
    back = io.read_csv(p)
    assert np.allclose(back["t"], cols["t"], rtol=1e-12)
    assert back["l"].tolist() == list(range(5))


def test_csv_header_only(tmp_path):
    p = io.write_csv({"a": [], "b": []}, tmp_path / "e.csv")
    assert p.read_text() == "a,b\n"
    back = io.read_csv(p)
    assert back["a"].size == 0


def test_csv_unequal_columns(tmp_path):
    with pytest.raises(ValueError):
        io.write_csv({"a": [1, 2], "b": [1]}, tmp_path / "x.csv")


def test_pgm_exact_bytes(tmp_path):
    p = io.write_pgm(np.array([[0.0, 1.0], [2.0, 4.0]]), tmp_path / "m.pgm")
    assert p.read_bytes() == b"P5\n# min=0.000000e+00 max=4.000000e+00 scaling=linear\n2 2\n255\n\x00@\x80\xff"
    assert io.read_pgm(p).tolist() == [[0, 64], [128, 255]]


def test_pgm_log_scaling(tmp_path):
    m = np.array([[1e-6, 1e-2, 1.0]])
    img = io.read_pgm(io.write_pgm(m, tmp_path / "l.pgm", "log"))
    assert img[0, 0] == 0 and img[0, 2] == 255 and 0 < img[0, 1] < 255


@pytest.mark.parametrize("bad, word", [(np.nan, "NaN"), (-1.0, "negative")])
def test_pgm_rejects_bad_entries(tmp_path, bad, word):
    m = np.ones((3, 3))
    m[1, 2] = bad
    with pytest.raises(ValueError, match=r"\(1, 2\)"):
        io.write_pgm(m, tmp_path / "b.pgm")


def test_compare_metrics():
    t = np.linspace(0, 10, 101)
    a = io.Series("a", t, np.sin(t))
    b = io.Series("b", t[::2], np.sin(t[::2]) + 0.1)
    rep = io.compare(a, b, width=2.0)
    assert np.array_equal(rep.grid, t)
    assert rep.max_abs == pytest.approx(0.1, abs=0.02)
    assert rep.relative_to_width == pytest.approx(rep.max_abs / 2)
    assert rep.l2 <= rep.max_abs
    same = io.compare(a, a)
    assert same.max_abs == 0 and np.isnan(same.relative_to_width)


def test_compare_partial_overlap():
    a = io.Series("a", [0, 1, 2, 3], [0, 1, 2, 3])
    b = io.Series("b", [2, 3, 4, 5], [2, 3, 4, 5])
    rep = io.compare(a, b)
    assert rep.grid.tolist() == [2, 3] and rep.max_abs == 0


def test_compare_disjoint():
    with pytest.raises(ValueError, match="disjoint"):
        io.compare(io.Series("a", [0, 1], [0, 0]), io.Series("b", [2, 3], [0, 0]))


def test_series_shape_check():
    with pytest.raises(ValueError):
        io.Series("x", [0, 1, 2], [0, 1])


def test_manifest(tmp_path):
    f = io.write_csv({"a": [1.0]}, tmp_path / "a.csv")
    man = io.RunManifest("flat-evolve", {"b": 1, "a": np.float64(2.0)}, "0.1.0", 0.5)
    man.add(f)
    path = man.write(tmp_path)
    d = json.loads(path.read_text())
    assert d["files"]["a.csv"] == io.sha256_file(f)
    assert list(d["config"]) == ["a", "b"]
    loaded = io.RunManifest.load(path)
    assert loaded.verify(tmp_path)
    f.write_text("changed\n")
    assert not loaded.verify(tmp_path)
    with pytest.raises(OSError):
        man.write(tmp_path)


def test_canonical_json_is_stable():
    assert io.canonical_json({"b": [1, 2], "a": np.int64(3)}) == '{"a":3,"b":[1,2]}'
