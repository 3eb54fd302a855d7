import json
import subprocess
import sys
from pathlib import Path

from alphaeta.cli import main


def run(args) -> int:
    return main([str(a) for a in args])


def test_bounds_reproduces_reference_numbers(tmp_path, capsys):
    rc = run(["bounds", "--key-length", 4400, "--bases", 2048,
              "--photons", 40000, "--out", tmp_path])
    assert rc == 0
    text = capsys.readouterr().out
    assert "550" in text
    doc = json.loads((tmp_path / "bounds.json").read_text())
    assert doc["n0_bound"] == 550
    assert doc["n1_bound"] in (489, 490)
    assert (tmp_path / "bounds.csv").read_text().count("\n") == 2
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["subcommand"] == "bounds"
    assert "version" in manifest


def test_analyze_bundled_example(tmp_path, capsys):
    rc = run(["analyze", "--n-max", 3, "--out", tmp_path])
    assert rc == 0
    doc = json.loads((tmp_path / "analysis.json").read_text())
    assert doc["gamma"] == 1 and doc["lambda"] == 1
    assert doc["shannon_limit_ok"]
    csv = (tmp_path / "entropy_profile.csv").read_text()
    assert csv.splitlines()[0] == "n,H_K_given_Y,H_K_given_XY,H_X_given_Y,H_Y_given_X"
    assert (tmp_path / "entropy_profile.png").stat().st_size > 0


def test_analyze_invalid_table(tmp_path):
    bad = {
        "plaintext_alphabet": [0, 1],
        "key_alphabet": ["k"],
        "ciphertext_alphabet": ["a"],
        "entries": [
            {"x": 0, "k": "k", "ys": ["a"]},
            {"x": 1, "k": "k", "ys": ["a"]},
        ],
    }
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    rc = run(["analyze", "--table", p, "--out", tmp_path / "out"])
    assert rc == 1
    doc = json.loads((tmp_path / "out" / "analysis.json").read_text())
    assert not doc["valid"]


def test_simulate_deterministic_and_seed_sensitive(tmp_path):
    args = ["simulate", "--photons-grid", "1,4", "--bases", 16,
            "--trials", 20000, "--seed", 7]
    assert run(args + ["--out", tmp_path / "a"]) == 0
    assert run(args + ["--out", tmp_path / "b"]) == 0
    a = (tmp_path / "a" / "simulate.csv").read_bytes()
    b = (tmp_path / "b" / "simulate.csv").read_bytes()
    assert a == b
    assert run(["simulate", "--photons-grid", "1,4", "--bases", 16,
                "--trials", 20000, "--seed", 8, "--out", tmp_path / "c"]) == 0
    assert (tmp_path / "c" / "simulate.csv").read_bytes() != a
    assert (tmp_path / "a" / "bob_eve_error.png").stat().st_size > 0
    assert (tmp_path / "a" / "csv_schemas.json").exists()


def test_simulate_threads_do_not_change_output(tmp_path):
    base = ["simulate", "--photons-grid", "1,4,9", "--bases", 16,
            "--trials", 20000, "--seed", 7]
    assert run(base + ["--out", tmp_path / "a", "--threads", 1]) == 0
    assert run(base + ["--out", tmp_path / "b", "--threads", 3]) == 0
    assert (tmp_path / "a" / "simulate.csv").read_bytes() == \
        (tmp_path / "b" / "simulate.csv").read_bytes()


def test_simulate_requires_seed(tmp_path, capsys):
    rc = run(["simulate", "--photons-grid", "1", "--out", tmp_path])
    assert rc == 2
    assert "seed" in capsys.readouterr().err


def test_simulate_rejects_empty_grid(tmp_path, capsys):
    rc = run(["simulate", "--seed", 1, "--out", tmp_path])
    assert rc == 2
    assert "s_grid" in capsys.readouterr().err


def test_simulate_record_dump(tmp_path):
    cfg = {"simulate": {"s_grid": [4.0], "bases": 8, "trials": 5000,
                        "halfcircle_trials": 5000, "dump_records": 20}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert run(["simulate", "--config", p, "--seed", 3, "--out", tmp_path / "o"]) == 0
    qumodes = (tmp_path / "o" / "qumodes.csv").read_text().splitlines()
    assert qumodes[0] == "i,x,z,theta_steps,energy"
    assert len(qumodes) == 21
    meas = (tmp_path / "o" / "measurements.csv").read_text().splitlines()
    assert meas[0] == "i,model,q1,q2,theta_meas,wedge_j"
    # one heterodyne and one exact-phase row per record
    assert len(meas) == 41
    assert sum(1 for ln in meas[1:] if ",phase,,," in ln) == 20


def test_attack_config_driven(tmp_path):
    cfg = {
        "attack": {
            "individual": {"photons": 2.0, "bases_grid": [2, 4]},
            "halfcircle": {"photons": 100.0, "trials": 50000},
            "kpa": {"key_length": 8, "taps": [8, 6, 5, 4], "bases": 16,
                    "photons": 18.0, "window": 2.4, "trials": 3, "symbols": 8},
        }
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert run(["attack", "--config", p, "--seed", 5, "--out", tmp_path / "o"]) == 0
    doc = json.loads((tmp_path / "o" / "attack_report.json").read_text())
    assert doc["kpa"]["recall"] == 1.0
    assert "individual" in doc and "halfcircle" in doc
    assert (tmp_path / "o" / "individual_error.png").stat().st_size > 0
    trials_csv = (tmp_path / "o" / "kpa_trials.csv").read_text().splitlines()
    assert trials_csv[0] == "trial,work,n_recovered,planted_recovered"
    assert len(trials_csv) == 4


def test_simulate_dump_with_lfsr_block(tmp_path):
    cfg = {"simulate": {"s_grid": [9.0], "bases": 4, "trials": 2000,
                        "halfcircle_trials": 2000, "dump_records": 8,
                        "lfsr": {"length": 4, "taps": [4, 1], "seed_hex": "9"}}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert run(["simulate", "--config", p, "--seed", 1, "--out", tmp_path / "o"]) == 0
    rows = (tmp_path / "o" / "qumodes.csv").read_text().splitlines()[1:]
    z = [int(r.split(",")[2]) for r in rows]
    from alphaeta.keystream import LfsrConfig, lfsr_symbols, seed_from_hex

    expected = lfsr_symbols(LfsrConfig(4, (4, 1), seed_from_hex("9", 4)), 8, 2)
    assert z == expected.tolist()


def test_attack_kpa_fixed_seed_hex(tmp_path):
    cfg = {"attack": {"kpa": {"key_length": 8, "taps": [8, 6, 5, 4], "bases": 16,
                              "photons": 18.0, "window": 2.4, "trials": 2,
                              "symbols": 8, "seed_hex": "a5"}}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert run(["attack", "--config", p, "--seed", 5, "--out", tmp_path / "o"]) == 0
    doc = json.loads((tmp_path / "o" / "attack_report.json").read_text())
    assert doc["kpa"]["recall"] == 1.0
    assert "a5" in doc["kpa"]["recovered_seeds_hex_first_trial"]


def test_attack_kpa_scaling_sweep(tmp_path):
    cfg = {"attack": {"kpa_scaling": {
        "key_lengths": [8, 12],
        "taps": {"8": [8, 6, 5, 4], "12": [12, 6, 4, 1]},
        "bases": 16, "photons": 18.0, "window": 2.4, "trials": 3}}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert run(["attack", "--config", p, "--seed", 9, "--out", tmp_path / "o"]) == 0
    lines = (tmp_path / "o" / "kpa_scaling.csv").read_text().splitlines()
    assert lines[0] == "key_length,pivots,mean_work,predicted"
    assert len(lines) == 3
    assert (tmp_path / "o" / "kpa_scaling.png").stat().st_size > 0
    doc = json.loads((tmp_path / "o" / "attack_report.json").read_text())
    assert doc["kpa_scaling"][0]["pivots"] == 2


def test_attack_kpa_window_too_small_flagged(tmp_path, capsys):
    # window 0 on noisy wedges: candidate sets miss the truth, recall drops
    cfg = {"attack": {"kpa": {"key_length": 8, "taps": [8, 6, 5, 4], "bases": 16,
                              "photons": 18.0, "window": 0.0, "trials": 4,
                              "symbols": 8}}}
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    assert run(["attack", "--config", p, "--seed", 6, "--out", tmp_path / "o"]) == 0
    doc = json.loads((tmp_path / "o" / "attack_report.json").read_text())
    assert doc["kpa"]["recall"] < 0.95
    assert doc["kpa"]["window_too_small"] is True
    assert "window" in capsys.readouterr().err


def test_attack_requires_config(tmp_path, capsys):
    rc = run(["attack", "--seed", 1, "--out", tmp_path])
    assert rc == 2
    assert "attack" in capsys.readouterr().err


def test_attack_missing_field_path_in_error(tmp_path, capsys):
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps({"attack": {"kpa": {"key_length": 8}}}))
    rc = run(["attack", "--config", p, "--seed", 1, "--out", tmp_path / "o"])
    assert rc == 2
    assert "attack.kpa.taps" in capsys.readouterr().err


def test_nishioka_outputs(tmp_path, capsys):
    rc = run(["nishioka", "--photons-grid", "4", "--bases", 8,
              "--trials", 100000, "--seed", 2, "--out", tmp_path])
    assert rc == 0
    assert "counterexample" in capsys.readouterr().out
    doc = json.loads((tmp_path / "nishioka.json").read_text())
    assert doc[0]["counterexample"] is not None
    csv = (tmp_path / "nishioka.csv").read_text().splitlines()
    assert csv[0].startswith("s,bases,trials,mc_failure_rate")
    assert (tmp_path / "nishioka.png").stat().st_size > 0


def test_homophonic_cli_pipeline(tmp_path):
    prior = tmp_path / "prior.json"
    prior.write_text(json.dumps({"0": "1/2", "1": "1/4", "2": "1/4"}))
    out = tmp_path / "o"
    assert run(["homophonic", "--mode", "build", "--prior", prior,
                "--block-bits", 2, "--out", out]) == 0
    data = tmp_path / "data.bin"
    data.write_bytes(bytes([0, 1, 2, 0, 0, 1]))
    enc = tmp_path / "enc.bin"
    dec = tmp_path / "dec.bin"
    assert run(["homophonic", "--mode", "encode", "--code", out / "code.json",
                "--in", data, "--out-file", enc, "--seed", 4, "--out", out]) == 0
    assert run(["homophonic", "--mode", "decode", "--code", out / "code.json",
                "--in", enc, "--out-file", dec, "--out", out]) == 0
    assert dec.read_bytes() == data.read_bytes()
    assert run(["homophonic", "--mode", "verify", "--code", out / "code.json",
                "--seed", 4, "--out", out,
                "--config", _write_cfg(tmp_path, {"homophonic": {"trials": 40000}})]) == 0
    doc = json.loads((out / "homophonic_verify.json").read_text())
    assert doc["symbolic_uniformity"] is True
    assert doc["p_value"] > 1e-4


def _write_cfg(tmp_path, doc):
    p = tmp_path / "hcfg.json"
    p.write_text(json.dumps(doc))
    return p


def test_bundled_demo_configs_parse_and_run(tmp_path):
    # cheap variants of the shipped demo configs: every block must validate
    root = Path(__file__).resolve().parent.parent / "configs"
    sim = json.loads((root / "simulate_demo.json").read_text())
    sim["simulate"].update({"trials": 4000, "halfcircle_trials": 4000,
                            "s_grid": [1.0, 4.0], "dump_records": 4})
    p = tmp_path / "sim.json"
    p.write_text(json.dumps(sim))
    assert run(["simulate", "--config", p, "--seed", 1, "--out", tmp_path / "s"]) == 0

    atk = json.loads((root / "attack_demo.json").read_text())
    atk["attack"]["individual"]["bases_grid"] = [2, 4]
    atk["attack"]["halfcircle"]["trials"] = 40000
    atk["attack"]["gamma"].update({"trials": 400000, "bases": 32, "photons": 25.0})
    atk["attack"]["kpa"]["trials"] = 2
    p = tmp_path / "atk.json"
    p.write_text(json.dumps(atk))
    assert run(["attack", "--config", p, "--seed", 2, "--out", tmp_path / "a"]) == 0

    nis = json.loads((root / "nishioka_demo.json").read_text())
    nis["nishioka"].update({"trials": 20000, "s_grid": [2.0]})
    p = tmp_path / "nis.json"
    p.write_text(json.dumps(nis))
    assert run(["nishioka", "--config", p, "--seed", 3, "--out", tmp_path / "n"]) == 0


def test_console_script_entry_point(tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "alphaeta.cli", "bounds", "--key-length", "4400",
         "--bases", "2048", "--photons", "40000", "--out", str(tmp_path)],
        capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert "550" in result.stdout
