import csv
import subprocess
import sys

import numpy as np
import pytest

from fastce import ColorImage, GrayImage, generate_synthetic, read_image, write_image
from fastce.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def gray_file(tmp_path):
    path = tmp_path / "in.pgm"
    write_image(generate_synthetic("two-peak", 96, 64, seed=4), path)
    return path


def test_enhance_happy_path(gray_file, tmp_path, capsys):
    out = tmp_path / "out.pgm"
    code = main(["enhance", "--algo", "fhe", "--s", "8", "--ng", "64", str(gray_file), str(out)])
    assert code == EXIT_OK
    assert read_image(out).height == 64
    err = capsys.readouterr().err
    assert "algo=fhe s=8 ng=64" in err and "time=" in err


def test_enhance_fast_equals_naive_bytes(gray_file, tmp_path):
    a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
    assert main(["enhance", "--algo", "fhe", "--s", "1", "--ng", "256", str(gray_file), str(a)]) == 0
    assert main(["enhance", "--algo", "he", str(gray_file), str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c, d = tmp_path / "c.pgm", tmp_path / "d.pgm"
    assert main(["enhance", "--algo", "fsmirank", "--s", "1", "--ng", "256", str(gray_file),
                 str(c)]) == 0
    assert main(["enhance", "--algo", "smirank", str(gray_file), str(d)]) == 0
    assert c.read_bytes() == d.read_bytes()


def test_enhance_bad_ng(gray_file, tmp_path, capsys):
    with pytest.raises(SystemExit) as info:
        main(["enhance", "--ng", "100", str(gray_file), str(tmp_path / "o.pgm")])
    assert info.value.code == EXIT_USAGE
    assert "n_g must be a power of two" in capsys.readouterr().err


def test_enhance_missing_input(tmp_path):
    assert main(["enhance", str(tmp_path / "none.pgm"), str(tmp_path / "o.pgm")]) == EXIT_IO


def test_enhance_grid_too_large(gray_file, tmp_path):
    code = main(["enhance", "--algo", "fsmirank", "--grid", "64x64", str(gray_file),
                 str(tmp_path / "o.pgm")])
    assert code == EXIT_USAGE


def test_enhance_color(tmp_path, rng):
    src = tmp_path / "c.ppm"
    img = ColorImage(rng.integers(0, 256, (32, 40, 3)))
    write_image(img, src)
    out = tmp_path / "o.ppm"
    assert main(["enhance", "--algo", "he", str(src), str(out)]) == EXIT_OK
    result = read_image(out)
    assert isinstance(result, ColorImage) and result.pixels.shape == (32, 40, 3)


def test_enhance_debug_dir(gray_file, tmp_path):
    dbg = tmp_path / "dbg"
    assert main(["enhance", "--algo", "fsmirank", "--debug-dir", str(dbg), str(gray_file),
                 str(tmp_path / "o.pgm")]) == EXIT_OK
    assert {p.name for p in dbg.iterdir()} == {"lut.csv", "mi.csv", "stochastic.csv", "rank.csv"}


def test_gen(tmp_path):
    path = tmp_path / "g.pgm"
    assert main(["gen", str(path), "--kind", "smooth-gradient", "--width", "256",
                 "--height", "1"]) == EXIT_OK
    np.testing.assert_array_equal(read_image(path).pixels[0], np.arange(256))


def test_sweep_rows(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    for i in range(2):
        write_image(generate_synthetic("uniform-noise", 64, 64, seed=i), corpus / f"{i}.pgm")
    out = tmp_path / "s.csv"
    code = main(["sweep", "--corpus", str(corpus), "--s", "1,4,8,16", "--ng", "256,128,64,32",
                 "--grid", "2x2", "--reps", "3", "--warmup", "0", "--csv", str(out)])
    assert code == EXIT_OK
    rows = list(csv.reader(open(out)))
    assert rows[0] == ("algorithm,s,ng,alpha,image_id,width,height,wall_time_us,"
                       "mean_abs_diff,max_abs_diff").split(",")
    assert len(rows) - 1 == 4 * 4 * 4 * 2
    assert "speedup" in capsys.readouterr().out


def test_sweep_unreadable_corpus(tmp_path):
    assert main(["sweep", "--corpus", str(tmp_path / "none"), "--csv",
                 str(tmp_path / "s.csv")]) == EXIT_IO


def test_sweep_bad_reps(tmp_path):
    assert main(["sweep", "--reps", "1", "--csv", str(tmp_path / "s.csv")]) == EXIT_USAGE


def test_verify_clean_corpus_with_constant(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    write_image(generate_synthetic("two-peak", 80, 64, seed=0), corpus / "a.pgm")
    write_image(GrayImage(np.full((64, 64), 3, np.uint8)), corpus / "flat.pgm")
    assert main(["verify", str(corpus)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out and "fhe-he-equivalence" in out


def test_verify_synthetic_default():
    assert main(["verify", "--count", "4", "--size", "96x72"]) == EXIT_OK


def test_verify_detects_wrong_delta(monkeypatch, capsys):
    import fastce.equalization as equalization
    from fastce.mapping import PartialCurve

    real = equalization.calibrate

    def wrong_delta(curve, bit_depth=8):
        stretched = PartialCurve(curve.x * 2, curve.y, curve.delta * 2, curve.domain)
        return real(stretched, bit_depth)

    monkeypatch.setattr(equalization, "calibrate", wrong_delta)
    assert main(["verify", "--count", "2", "--size", "64x64"]) == EXIT_FAIL
    assert "fhe-he-equivalence" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    path = tmp_path / "g.pgm"
    proc = subprocess.run([sys.executable, "-m", "fastce", "gen", str(path), "--width", "8",
                           "--height", "8"], capture_output=True)
    assert proc.returncode == 0 and path.exists()
    proc = subprocess.run([sys.executable, "-m", "fastce", "bogus"], capture_output=True)
    assert proc.returncode == EXIT_USAGE
