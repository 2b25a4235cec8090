import numpy as np
import pytest

from securepix import codec
from securepix.cli import main
from securepix.frame import ImageFrame, read_netpbm, synthetic_natural, write_netpbm


def run_cli(*args):
    return main([str(a) for a in args])


@pytest.fixture()
def workdir(tmp_path, monkeypatch):
    monkeypatch.delenv("SECUREPIX_CONFIG", raising=False)
    img = synthetic_natural(32, 32, seed=7)
    write_netpbm(tmp_path / "plain.pgm", img)
    return tmp_path


def test_keygen_prints_key_space(workdir, capsys):
    rc = run_cli(
        "keygen", "--rows", 32, "--cols", 32, "--levels", 16,
        "--seed", 1, "--out", workdir / "key.spk",
    )
    assert rc == 0
    assert "4096 bits" in capsys.readouterr().out
    key = codec.read_key(workdir / "key.spk")
    assert key.matrix.levels.shape == (32, 32)


def test_keygen_same_seed_identical_files(workdir):
    run_cli("keygen", "--rows", 8, "--cols", 8, "--seed", 9, "--out", workdir / "a.spk")
    run_cli("keygen", "--rows", 8, "--cols", 8, "--seed", 9, "--out", workdir / "b.spk")
    run_cli("keygen", "--rows", 8, "--cols", 8, "--seed", 10, "--out", workdir / "c.spk")
    a = (workdir / "a.spk").read_bytes()
    assert a == (workdir / "b.spk").read_bytes()
    assert a != (workdir / "c.spk").read_bytes()


def test_keygen_rejects_degenerate_level_count(workdir, capsys):
    rc = run_cli("keygen", "--rows", 4, "--cols", 4, "--levels", 1,
                 "--seed", 0, "--out", workdir / "bad.spk")
    assert rc != 0
    assert "levels" in capsys.readouterr().err


def test_encrypt_decrypt_cycle(workdir, capsys):
    run_cli("keygen", "--rows", 32, "--cols", 32, "--seed", 3, "--out", workdir / "key.spk")
    rc = run_cli(
        "encrypt", workdir / "plain.pgm", workdir / "enc.pgm",
        "--key", workdir / "key.spk", "--no-variation",
    )
    assert rc == 0
    assert "half-select audit" in capsys.readouterr().out
    enc, meta = read_netpbm(workdir / "enc.pgm")
    assert meta["seed"] == "0"
    assert len(meta["config"]) == 64
    rc = run_cli("decrypt", workdir / "enc.pgm", workdir / "dec.pgm", "--key", workdir / "key.spk")
    assert rc == 0
    plain, _ = read_netpbm(workdir / "plain.pgm")
    dec, _ = read_netpbm(workdir / "dec.pgm")
    assert np.abs(dec.data.astype(int) - plain.data.astype(int)).max() <= 2


def test_round_trip_psnr_via_metrics_command(workdir, capsys):
    run_cli("keygen", "--rows", 32, "--cols", 32, "--seed", 3, "--out", workdir / "key.spk")
    run_cli("encrypt", workdir / "plain.pgm", workdir / "enc.pgm",
            "--key", workdir / "key.spk", "--no-variation")
    run_cli("decrypt", workdir / "enc.pgm", workdir / "dec.pgm", "--key", workdir / "key.spk")
    capsys.readouterr()
    run_cli("metrics", workdir / "dec.pgm", workdir / "plain.pgm")
    out = capsys.readouterr().out
    psnr_line = next(ln for ln in out.splitlines() if ln.startswith("psnr_db"))
    assert float(psnr_line.split("=")[1]) >= 46.0


def test_wrong_key_decrypt_scores_badly(workdir, capsys):
    run_cli("keygen", "--rows", 32, "--cols", 32, "--seed", 3, "--out", workdir / "key.spk")
    run_cli("keygen", "--rows", 32, "--cols", 32, "--seed", 77, "--out", workdir / "other.spk")
    run_cli("encrypt", workdir / "plain.pgm", workdir / "enc.pgm",
            "--key", workdir / "key.spk", "--no-variation")
    run_cli("decrypt", workdir / "enc.pgm", workdir / "stolen.pgm",
            "--key", workdir / "other.spk")
    capsys.readouterr()
    run_cli("metrics", workdir / "stolen.pgm", workdir / "plain.pgm")
    out = capsys.readouterr().out
    psnr_line = next(ln for ln in out.splitlines() if ln.startswith("psnr_db"))
    assert float(psnr_line.split("=")[1]) < 20.0


def test_color_ppm_cycle(workdir):
    base = synthetic_natural(16, 16, seed=5).data
    rgb = np.stack([base, np.roll(base, 1, axis=0), 255 - base], axis=2)
    write_netpbm(workdir / "color.ppm", ImageFrame(data=rgb))
    run_cli("keygen", "--rows", 16, "--cols", 16, "--seed", 2, "--out", workdir / "k16.spk")
    run_cli("encrypt", workdir / "color.ppm", workdir / "color_enc.ppm",
            "--key", workdir / "k16.spk", "--no-variation")
    run_cli("decrypt", workdir / "color_enc.ppm", workdir / "color_dec.ppm",
            "--key", workdir / "k16.spk")
    enc, _ = read_netpbm(workdir / "color_enc.ppm")
    dec, _ = read_netpbm(workdir / "color_dec.ppm")
    assert enc.channels == 3 and dec.channels == 3
    assert np.abs(dec.data.astype(int) - rgb.astype(int)).max() <= 2


def test_metrics_output(workdir, capsys):
    rc = run_cli("metrics", workdir / "plain.pgm", workdir / "plain.pgm")
    assert rc == 0
    out = capsys.readouterr().out
    assert "horizontal_corr" in out and "psnr_db = inf" in out
    rc = run_cli("metrics", workdir / "plain.pgm", "--csv")
    out = capsys.readouterr().out
    assert rc == 0
    assert out.splitlines()[0] == "metric,value"


def test_reruns_are_byte_identical(workdir):
    """Every command rerun with identical seeds produces identical bytes."""
    for tag in ("x", "y"):
        run_cli("keygen", "--rows", 16, "--cols", 16, "--seed", 4,
                "--out", workdir / f"k{tag}.spk")
        img16 = synthetic_natural(16, 16, seed=1)
        write_netpbm(workdir / f"p{tag}.pgm", img16)
        run_cli("encrypt", workdir / f"p{tag}.pgm", workdir / f"e{tag}.pgm",
                "--key", workdir / f"k{tag}.spk", "--seed", 11)
        run_cli("decrypt", workdir / f"e{tag}.pgm", workdir / f"d{tag}.pgm",
                "--key", workdir / f"k{tag}.spk")
        run_cli("curves", "--out-dir", workdir / f"curves_{tag}", "--points", 256)
        run_cli("mc-report", "--samples", 500, "--seed", 2,
                "--out", workdir / f"mc{tag}.csv")
    assert (workdir / "kx.spk").read_bytes() == (workdir / "ky.spk").read_bytes()
    assert (workdir / "ex.pgm").read_bytes() == (workdir / "ey.pgm").read_bytes()
    assert (workdir / "dx.pgm").read_bytes() == (workdir / "dy.pgm").read_bytes()
    assert (workdir / "mcx.csv").read_bytes() == (workdir / "mcy.csv").read_bytes()
    for level in (1, 16):
        name = f"curve_level_{level:02d}.csv"
        assert (workdir / "curves_x" / name).read_bytes() == (
            workdir / "curves_y" / name
        ).read_bytes()


def test_curves_emit_expected_files(workdir):
    rc = run_cli("curves", "--out-dir", workdir / "curves", "--points", 300)
    assert rc == 0
    files = sorted(p.name for p in (workdir / "curves").iterdir())
    assert files[0] == "curve_level_01.csv"
    assert len(files) == 16
    text = (workdir / "curves" / "curve_level_01.csv").read_text().splitlines()
    assert text[0] == "delta_vpd,i_out"
    assert len(text) == 301


def test_mc_report_contents(workdir):
    rc = run_cli("mc-report", "--samples", 1000, "--seed", 6, "--out", workdir / "mc.csv")
    assert rc == 0
    lines = (workdir / "mc.csv").read_text().splitlines()
    assert lines[0].startswith("level,pva,")
    assert len(lines) == 17
    first = lines[1].split(",")
    assert first[0] == "1" and float(first[1]) == 1.3


def test_error_exit_codes_are_distinct(workdir, capsys):
    run_cli("keygen", "--rows", 4, "--cols", 4, "--seed", 0, "--out", workdir / "k4.spk")
    # missing / malformed image -> 4, names the file
    rc_img = run_cli("encrypt", workdir / "absent.pgm", workdir / "o.pgm",
                     "--key", workdir / "k4.spk")
    err = capsys.readouterr().err
    assert rc_img == 4 and "absent.pgm" in err
    # malformed key -> 5
    (workdir / "broken.spk").write_text("NOT A KEY\n")
    rc_key = run_cli("encrypt", workdir / "plain.pgm", workdir / "o.pgm",
                     "--key", workdir / "broken.spk")
    assert rc_key == 5
    # dimension mismatch (32x32 image vs 4x4 key) -> 6
    rc_dim = run_cli("encrypt", workdir / "plain.pgm", workdir / "o.pgm",
                     "--key", workdir / "k4.spk")
    assert rc_dim == 6
    # bad config key -> 3
    rc_cfg = run_cli("curves", "--out-dir", workdir / "c", "--set", "nope=1")
    assert rc_cfg == 3
    assert len({rc_img, rc_key, rc_dim, rc_cfg}) == 4


def test_config_file_and_env_fallback(workdir, monkeypatch, capsys):
    cfg = workdir / "run.cfg"
    cfg.write_text("array.levels = 8\n")
    rc = run_cli("keygen", "--rows", 4, "--cols", 4, "--seed", 0,
                 "--out", workdir / "k8.spk", "--config", cfg)
    assert rc == 0
    assert "48 bits" in capsys.readouterr().out  # 16 pixels * 3 bits
    assert codec.read_key(workdir / "k8.spk").levels == 8
    # same through the environment variable
    monkeypatch.setenv("SECUREPIX_CONFIG", str(cfg))
    run_cli("keygen", "--rows", 4, "--cols", 4, "--seed", 0, "--out", workdir / "k8b.spk")
    assert codec.read_key(workdir / "k8b.spk").levels == 8
    capsys.readouterr()


def test_set_overrides_config_file(workdir, capsys):
    cfg = workdir / "run.cfg"
    cfg.write_text("array.levels = 8\n")
    rc = run_cli("keygen", "--rows", 4, "--cols", 4, "--seed", 0,
                 "--out", workdir / "k4s.spk", "--config", cfg,
                 "--set", "array.levels=4")
    assert rc == 0
    assert codec.read_key(workdir / "k4s.spk").levels == 4
    capsys.readouterr()


def test_set_changes_embedded_config_hash(workdir):
    run_cli("keygen", "--rows", 8, "--cols", 8, "--seed", 3, "--out", workdir / "k.spk")
    img = synthetic_natural(8, 8, seed=1)
    write_netpbm(workdir / "p8.pgm", img)
    run_cli("encrypt", workdir / "p8.pgm", workdir / "e1.pgm", "--key", workdir / "k.spk")
    run_cli("encrypt", workdir / "p8.pgm", workdir / "e2.pgm", "--key", workdir / "k.spk",
            "--set", "pixel.i_dark=1e-15")
    _, m1 = read_netpbm(workdir / "e1.pgm")
    _, m2 = read_netpbm(workdir / "e2.pgm")
    assert m1["config"] != m2["config"]


def test_usage_error_exits_with_two():
    with pytest.raises(SystemExit) as exc:
        main(["encrypt"])  # missing required arguments
    assert exc.value.code == 2
