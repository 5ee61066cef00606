import json

import pytest

from sweepout_lab.cli import main, parse_config, UsageError


def test_usage_errors_exit_2(capsys):
    assert main([]) == 2
    assert main(["nope"]) == 2
    assert main(["extract", "--a", "1,2"]) == 2
    assert main(["extract", "--z", "2,0"]) == 2
    assert main(["extract", "--res", "4"]) == 2
    assert main(["verify", "bogus"]) == 2
    assert main(["verify", "--seed", "-1"]) == 2
    assert main(["profile", "--jobs", "0"]) == 2


def test_config_parsing(tmp_path):
    assert parse_config("# c\nresolution = 32\ndelta0=0.002\nz_radii=0,1\n") == \
        {"resolution": 32, "delta0": 0.002, "z_radii": "0,1"}
    with pytest.raises(UsageError):
        parse_config("colour = red\n")
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("delta0 = 5\n")
    assert main(["extract", "--config", str(cfg)]) == 2


def test_extract_writes_obj(tmp_path, capsys):
    out = tmp_path / "s.obj"
    assert main(["extract", "--a", "0,1,0,0,0,0", "--res", "24", "--out", str(out)]) == 0
    assert "genus=0" in capsys.readouterr().out
    assert out.read_bytes().startswith(b"v ") and out.with_suffix(".r4").exists()


def test_verify_trig_json(capsys):
    assert main(["verify", "trig", "--seed", "5"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["passed"] and set(rep["suites"]) == {"trig"}


def test_links_and_surgery(capsys, tmp_path):
    assert main(["links"]) == 0
    assert "linking_number=" in capsys.readouterr().out
    log = tmp_path / "log.txt"
    assert main(["surgery", "--z", "1,0", "--res", "48", "--out", str(log)]) == 0
    lines = log.read_text().splitlines()
    assert lines[0].startswith("EVENT neck_pinch 1 0") and lines[-1].endswith("0 0 component=0")


def test_profile_csv(tmp_path):
    cfg = tmp_path / "p.cfg"
    cfg.write_text("a_levels = 0\nz_radii = 0\n")
    out = tmp_path / "p.csv"
    assert main(["profile", "--res", "16", "--config", str(cfg), "--out", str(out)]) == 0
    assert out.read_text().startswith("# sweepout-lab profile v1\n")
