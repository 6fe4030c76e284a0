import json
import subprocess
import sys


from visbeam.cli import main

SMALL = """grid_points: 2
drops: 8
antenna_counts: [36, 64]
irs_elements: [16]
irs_trials: 10
music_grid: [61, 61]
music_snapshots: 40
"""


def run_all(root, cfg, corpus_seed=4):
    assert main(["rate-map", "--config", str(cfg), "--out", str(root / "rm"), "--seed", "2"]) == 0
    assert main(["latency-sweep", "--config", str(cfg), "--out", str(root / "lat"), "--seed", "2"]) == 0
    assert main(["irs-nmse", "--config", str(cfg), "--out", str(root / "irs"), "--seed", "2"]) == 0
    assert main(["dataset", "synth", "--out", str(root / "corpus"), "--seed", str(corpus_seed),
                 "--records", "60"]) == 0
    assert main(["dataset", "select", "--in", str(root / "corpus"), "--out", str(root / "sel"),
                 "--active-classes", "0,1", "--max-people", "6", "--max-dist", "40",
                 "--seed", "2"]) == 0
    preds = root / "preds.json"
    preds.write_text(json.dumps({"scene_00000/0": [[0, 0, 100, 100], [400, 400, 500, 500]]}))
    assert main(["dataset", "make-labels", "--in", str(root / "corpus"), "--out", str(root / "lab"),
                 "--predictions", str(preds), "--seed", "2"]) == 0


def snapshot(root):
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_every_subcommand_byte_identical(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(SMALL)
    run_all(tmp_path / "a", cfg)
    run_all(tmp_path / "b", cfg)
    a, b = snapshot(tmp_path / "a"), snapshot(tmp_path / "b")
    assert a.keys() == b.keys() and len(a) > 10
    assert a == b
    assert (tmp_path / "a" / "rm" / "rate_map.csv").read_text().count("\n") == 1 + 4 * 5
    assert (tmp_path / "a" / "lab" / "scores.csv").exists()


def test_seed_changes_output(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text(SMALL)
    for seed in ("1", "2"):
        main(["rate-map", "--config", str(cfg), "--out", str(tmp_path / seed), "--seed", seed])
    assert (tmp_path / "1" / "rate_map.csv").read_bytes() != (tmp_path / "2" / "rate_map.csv").read_bytes()


def test_bad_config_reports_error(tmp_path, capsys):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("nonsense_key: 1\n")
    assert main(["rate-map", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "nonsense_key" in capsys.readouterr().err


def test_select_mode_only(tmp_path):
    main(["dataset", "synth", "--out", str(tmp_path / "c"), "--records", "40", "--seed", "1"])
    assert main(["dataset", "select", "--in", str(tmp_path / "c"), "--out", str(tmp_path / "s"),
                 "--active-classes", "person,P,L", "--max-dist", "100", "--max-people", "99",
                 "--mode", "only"]) == 0
    ids = (tmp_path / "s" / "selection.txt").read_text().split()
    assert len(ids) > 0


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "visbeam.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "latency-sweep" in out.stdout
