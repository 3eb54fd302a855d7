"""Experiment runner.

    alphaeta <subcommand> [--config cfg.json] [--seed N] [--out DIR] ...

Subcommands: ``analyze`` (exact cipher-table profiles), ``bounds``
(closed forms), ``simulate`` (receiver/attacker BER sweeps), ``attack``
(KPA search, individual attack, half-circle error, empirical
randomization), ``nishioka`` (half-circle reduction demo), ``homophonic``
(codec).  A config file supplies a JSON block per subcommand; explicit
flags override it.  Identical config and seed give byte-identical CSV
output regardless of --threads.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

import alphaeta
from alphaeta import attacks, bounds, homophonic, plotting
from alphaeta.ciphertable import CipherTable, gamma_lambda_exact, load_example_table, validate_table
from alphaeta.entropy import SequencePrior, entropy_profile, shannon_limit_check
from alphaeta.keystream import LfsrConfig, lfsr_symbols, seed_from_hex
from alphaeta.measurement import (
    bob_decide_array,
    bob_error_reference,
    heterodyne_phases,
    heterodyne_points,
    measurements_to_csv,
    phase_samples,
    wedge_quantize,
    wedge_quantize_array,
)
from alphaeta.rng import substream
from alphaeta.signal import (
    AlphaEtaParams,
    apply_channel,
    encrypt_sequence,
    mapper_steps,
    records_to_csv,
)

CSV_SCHEMAS = {
    "simulate.csv": {
        "s": "mean photon number at the transmitter",
        "eta": "line transmittance",
        "energy": "received energy eta*S",
        "trials": "Monte Carlo trials for the receiver BER",
        "bob_mc_ber": "measured keyed-receiver bit error rate (heterodyne)",
        "bob_ref_heterodyne": "closed form Q(2 sqrt(eta S))",
        "bob_ref_helstrom": "two-state optimum (1 - sqrt(1 - e^{-4 eta S}))/2",
        "bob_ref_approx": "e^{-4 eta S}/4",
        "eve_half_mc": "half-circle ciphertext-bit error, uniform-spread accounting",
        "eve_half_ref": "closed form 2/(pi sqrt(S))",
        "eve_half_gaussian": "Gaussian boundary-crossing rate (diagnostic)",
    },
    "entropy_profile.csv": {
        "n": "sequence length",
        "H_K_given_Y": "key entropy given ciphertext (bits)",
        "H_K_given_XY": "key entropy given plaintext and ciphertext (bits)",
        "H_X_given_Y": "plaintext entropy given ciphertext (bits)",
        "H_Y_given_X": "ciphertext entropy given plaintext (bits)",
    },
    "qumodes.csv": {
        "i": "symbol index",
        "x": "data bit",
        "z": "keystream symbol",
        "theta_steps": "phase in units of pi/M, integer in [0, 2M)",
        "energy": "mean photon number of the mode",
    },
    "measurements.csv": {
        "i": "symbol index",
        "model": "measurement model (heterodyne or phase)",
        "q1": "first quadrature (blank for phase outcomes)",
        "q2": "second quadrature (blank for phase outcomes)",
        "theta_meas": "measured phase in [0, 2pi)",
        "wedge_j": "wedge index in [0, 2M)",
    },
    "individual_error.csv": {
        "bases": "number of bases M",
        "p_error": "keyless attacker optimal per-bit error",
    },
    "kpa_trials.csv": {
        "trial": "trial index",
        "work": "linear-system solves",
        "n_recovered": "consistent seeds found",
        "planted_recovered": "1 when the planted seed is among them",
    },
    "kpa_scaling.csv": {
        "key_length": "LFSR length in bits",
        "pivots": "pivot symbols used",
        "mean_work": "average solves per trial",
        "predicted": "(candidate count)^pivots",
    },
    "nishioka.csv": {
        "s": "mean photon number",
        "bases": "number of bases M",
        "trials": "Monte Carlo trials",
        "mc_failure_rate": "measured decode-with-key failure rate of F",
        "reference_rate": "quoted reference e^{-S}/2",
        "gaussian_reference": "half-plane crossing Q(2 sqrt(S)) (this noise convention)",
    },
    "homophonic_freq.csv": {
        "block": "output block value",
        "count": "occurrences",
        "frequency": "count / total",
    },
    "gamma_report rows (attack_report.json)": {
        "gamma_emp": "measured per-symbol key redundancy",
        "lambda_emp": "measured per-symbol ciphertext randomization",
    },
}


class ConfigError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise ConfigError(path, message)


def _load_config(args, subcommand: str) -> dict:
    cfg: dict = {}
    if args.config:
        doc = json.loads(Path(args.config).read_text())
        _require(isinstance(doc, dict), "config", "top level must be an object")
        cfg = doc.get(subcommand, doc)
        _require(isinstance(cfg, dict), subcommand, "subcommand block must be an object")
    return dict(cfg)


def _merge_flag(cfg: dict, key: str, value) -> None:
    if value is not None:
        cfg[key] = value


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _need_seed(args) -> int:
    _require(args.seed is not None, "seed", "--seed is mandatory for stochastic runs")
    return args.seed


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _write(path: Path, text: str, outputs: list) -> None:
    path.write_text(text)
    outputs.append(path.name)


def _finish(out: Path, subcommand: str, cfg: dict, seed, started: float, outputs: list) -> None:
    manifest = {
        "subcommand": subcommand,
        "config": cfg,
        "seed": seed,
        "version": alphaeta.__version__,
        "elapsed_s": round(time.time() - started, 3),
        "outputs": sorted(outputs),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    (out / "csv_schemas.json").write_text(json.dumps(CSV_SCHEMAS, indent=2))


def _map_ordered(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- analyze

def cmd_analyze(args) -> int:
    cfg = _load_config(args, "analyze")
    _merge_flag(cfg, "table", args.table)
    _merge_flag(cfg, "n_max", args.n_max)
    cfg.setdefault("n_max", 4)
    _require(int(cfg["n_max"]) >= 1, "analyze.n_max", "must be >= 1")
    out = _out_dir(args)
    started = time.time()
    outputs: list = []

    if cfg.get("table"):
        table = CipherTable.from_json(Path(cfg["table"]).read_text())
    else:
        table = load_example_table()
    report = validate_table(table)
    doc: dict = {
        "valid": report.ok,
        "problems": list(report.problems),
        "collisions": [list(map(repr, c)) for c in report.collisions],
    }
    if report.ok:
        gamma, lam = gamma_lambda_exact(table)
        doc["gamma"] = gamma
        doc["lambda"] = lam
        profile = entropy_profile(table, SequencePrior("uniform"), n_max=int(cfg["n_max"]))
        check = shannon_limit_check(profile)
        doc.update({
            "H_K": profile.H_K,
            "n0": profile.n0, "n1": profile.n1,
            "n1_bar": profile.n1_bar, "n_d": profile.n_d,
            "shannon_limit_ok": check.ok,
            "shannon_min_slack": check.min_slack,
        })
        _write(out / "entropy_profile.csv", profile.to_csv(), outputs)
        ns = list(range(1, profile.n_max + 1))
        plotting.line_plot(
            out / "entropy_profile.png", ns,
            {
                "H(K|Y)": (profile.H_K_given_Y, "o-"),
                "H(K|XY)": (profile.H_K_given_XY, "s-"),
                "H(X|Y)": (profile.H_X_given_Y, "^-"),
                "H(K)": ([profile.H_K] * len(ns), "k--"),
            },
            xlabel="sequence length n", ylabel="bits",
            title="exact entropy profile",
        )
        outputs.append("entropy_profile.png")
        print(f"gamma={gamma} lambda={lam} n0={profile.n0} n1={profile.n1} n_d={profile.n_d}")
    else:
        print("table invalid:", "; ".join(doc["problems"]) or f"{len(report.collisions)} collisions")
    _write(out / "analysis.json", json.dumps(doc, indent=2), outputs)
    _finish(out, "analyze", cfg, args.seed, started, outputs)
    return 0 if report.ok else 1


# ---------------------------------------------------------------- bounds

def cmd_bounds(args) -> int:
    cfg = _load_config(args, "bounds")
    _merge_flag(cfg, "key_length", args.key_length)
    _merge_flag(cfg, "bases", args.bases)
    _merge_flag(cfg, "photons", args.photons)
    _merge_flag(cfg, "eta", args.eta)
    for k in ("key_length", "bases", "photons"):
        _require(k in cfg, f"bounds.{k}", "required")
    cfg.setdefault("eta", 1.0)
    out = _out_dir(args)
    started = time.time()
    outputs: list = []
    report = bounds.build_bounds_report(
        int(cfg["key_length"]), int(cfg["bases"]), float(cfg["photons"]), float(cfg["eta"])
    )
    print(report.as_text())
    _write(out / "bounds.json", json.dumps(report.as_dict(), indent=2), outputs)
    d = report.as_dict()
    header = ",".join(d.keys())
    row = ",".join("" if v is None else repr(v) if isinstance(v, float) else str(v)
                   for v in d.values())
    _write(out / "bounds.csv", header + "\n" + row + "\n", outputs)
    _finish(out, "bounds", cfg, args.seed, started, outputs)
    return 0


# ---------------------------------------------------------------- simulate

def _simulate_point(task) -> dict:
    seed, idx, s, eta, M, trials, half_trials = task
    rng = substream(seed, "simulate", idx)
    energy = eta * s
    x = rng.integers(0, 2, trials)
    z = rng.integers(0, M, trials)
    steps = mapper_steps(x, z, M)
    phases = heterodyne_phases(energy, steps * (math.pi / M), rng)
    ber = float((bob_decide_array(phases, z, M) != x).mean())
    half = attacks.eve_halfcircle_error(s, half_trials, rng)
    return {
        "s": s, "eta": eta, "energy": energy, "trials": trials,
        "bob_mc_ber": ber,
        "bob_ref_heterodyne": bob_error_reference(energy, "heterodyne"),
        "bob_ref_helstrom": bob_error_reference(energy, "helstrom"),
        "bob_ref_approx": 0.25 * math.exp(-4.0 * energy),
        "eve_half_mc": half.estimate,
        "eve_half_ref": half.closed_form,
        "eve_half_gaussian": half.gaussian_crossing,
    }


def cmd_simulate(args) -> int:
    cfg = _load_config(args, "simulate")
    if args.photons_grid:
        cfg["s_grid"] = _float_list(args.photons_grid)
    _merge_flag(cfg, "bases", args.bases)
    _merge_flag(cfg, "eta", args.eta)
    _merge_flag(cfg, "trials", args.trials)
    cfg.setdefault("eta", 1.0)
    cfg.setdefault("bases", 64)
    cfg.setdefault("trials", 200_000)
    cfg.setdefault("halfcircle_trials", 200_000)
    cfg.setdefault("dump_records", 0)
    _require(bool(cfg.get("s_grid")), "simulate.s_grid", "non-empty grid required")
    _require(all(s > 0 for s in cfg["s_grid"]), "simulate.s_grid", "entries must be > 0")
    seed = _need_seed(args)
    out = _out_dir(args)
    started = time.time()
    outputs: list = []

    tasks = [
        (seed, i, float(s), float(cfg["eta"]), int(cfg["bases"]),
         int(cfg["trials"]), int(cfg["halfcircle_trials"]))
        for i, s in enumerate(cfg["s_grid"])
    ]
    rows = _map_ordered(_simulate_point, tasks, args.threads)

    cols = list(rows[0].keys())
    lines = [",".join(cols)]
    for r in rows:
        lines.append(",".join(repr(r[c]) if isinstance(r[c], float) else str(r[c]) for c in cols))
    _write(out / "simulate.csv", "\n".join(lines) + "\n", outputs)

    s_vals = [r["s"] for r in rows]
    plotting.line_plot(
        out / "bob_eve_error.png", s_vals,
        {
            "Bob MC": ([max(r["bob_mc_ber"], 1e-12) for r in rows], "o"),
            "Q(2 sqrt(eta S))": ([max(r["bob_ref_heterodyne"], 1e-12) for r in rows], "-"),
            "Helstrom": ([max(r["bob_ref_helstrom"], 1e-12) for r in rows], "--"),
            "Eve half-circle MC": ([r["eve_half_mc"] for r in rows], "s"),
            "2/(pi sqrt S)": ([r["eve_half_ref"] for r in rows], ":"),
        },
        xlabel="mean photon number S", ylabel="bit error rate",
        title="receiver vs attacker error", logx=True, logy=True,
    )
    outputs.append("bob_eve_error.png")

    n_dump = int(cfg["dump_records"])
    if n_dump > 0:
        rng = substream(seed, "simulate", "dump")
        params = AlphaEtaParams(S=float(cfg["s_grid"][0]), M=int(cfg["bases"]), eta=float(cfg["eta"]))
        x = rng.integers(0, 2, n_dump)
        if "lfsr" in cfg:
            z = lfsr_symbols(_lfsr_from_config(cfg["lfsr"], "simulate.lfsr"), n_dump, params.m)
        else:
            z = rng.integers(0, params.M, n_dump)
        records = encrypt_sequence(x, z, params)
        _write(out / "qumodes.csv", records_to_csv(records), outputs)
        thetas = np.array([r.theta for r in records])
        q1, q2 = heterodyne_points(params.received_energy, thetas, rng)
        het_phases = np.mod(np.arctan2(q2, q1), 2 * math.pi)
        het_wedges = wedge_quantize_array(het_phases, params.M)
        rows_m = [
            (i, "heterodyne", float(q1[i]), float(q2[i]),
             float(het_phases[i]), int(het_wedges[i]))
            for i in range(n_dump)
        ]
        if params.received_energy <= 400.0:
            for i, rec in enumerate(records):
                received = apply_channel(rec, params.eta)
                ph = float(phase_samples(received, rng, 1, "exact")[0])
                rows_m.append((i, "phase", None, None, ph, wedge_quantize(ph, params.M)))
        _write(out / "measurements.csv", measurements_to_csv(rows_m), outputs)

    _finish(out, "simulate", cfg, seed, started, outputs)
    return 0


# ---------------------------------------------------------------- attack

def _lfsr_from_config(blk: dict, path: str) -> LfsrConfig:
    """LFSR block of the experiment config: {length, taps, seed_hex}."""
    for k in ("length", "taps", "seed_hex"):
        _require(k in blk, f"{path}.{k}", "required")
    length = int(blk["length"])
    return LfsrConfig(length, tuple(int(t) for t in blk["taps"]),
                      seed_from_hex(blk["seed_hex"], length))


def _kpa_trial(task) -> dict:
    seed, idx, key_length, taps, M, S, window, n_symbols, fixed_seed = task
    rng = substream(seed, "kpa", idx)
    params = AlphaEtaParams(S=S, M=M)
    base = LfsrConfig(key_length, tuple(taps), tuple([0] * (key_length - 1) + [1]))
    planted = fixed_seed if fixed_seed else int(rng.integers(1, 1 << key_length))
    cfg = base.with_seed(planted)
    z = lfsr_symbols(cfg, n_symbols, params.m)
    x = rng.integers(0, 2, n_symbols)
    phases = heterodyne_phases(S, mapper_steps(x, z, M) * (math.pi / M), rng)
    wedges = wedge_quantize_array(phases, M)
    report = attacks.kpa_lfsr_search(x, wedges, base, params, window)
    return {
        "trial": idx,
        "work": report.work,
        "n_recovered": len(report.recovered_seeds),
        "planted_recovered": int(planted in report.recovered_seeds),
        "report": report.as_dict(),
    }


def cmd_attack(args) -> int:
    cfg = _load_config(args, "attack")
    _require(bool(cfg), "attack", "config file with an attack block required")
    seed = _need_seed(args)
    out = _out_dir(args)
    started = time.time()
    outputs: list = []
    doc: dict = {}

    if "individual" in cfg:
        blk = cfg["individual"]
        _require("photons" in blk, "attack.individual.photons", "required")
        grid = blk.get("bases_grid", [2, 4, 8, 16, 32, 64])
        rows = [(int(M), attacks.individual_attack_error(float(blk["photons"]), int(M)))
                for M in grid]
        doc["individual"] = {"photons": blk["photons"],
                             "errors": {str(M): p for M, p in rows}}
        csv = "bases,p_error\n" + "".join(f"{M},{p!r}\n" for M, p in rows)
        _write(out / "individual_error.csv", csv, outputs)
        plotting.line_plot(
            out / "individual_error.png", [M for M, _ in rows],
            {"Helstrom error": ([p for _, p in rows], "o-"),
             "1/2": ([0.5] * len(rows), "k--")},
            xlabel="bases M", ylabel="attacker per-bit error",
            title=f"keyless individual attack, S={blk['photons']}", logx=True,
        )
        outputs.append("individual_error.png")

    if "halfcircle" in cfg:
        blk = cfg["halfcircle"]
        _require("photons" in blk, "attack.halfcircle.photons", "required")
        rng = substream(seed, "halfcircle")
        est = attacks.eve_halfcircle_error(float(blk["photons"]), int(blk.get("trials", 200_000)), rng)
        doc["halfcircle"] = dataclasses.asdict(est)

    if "gamma" in cfg:
        blk = cfg["gamma"]
        for k in ("photons", "bases", "trials"):
            _require(k in blk, f"attack.gamma.{k}", "required")
        rng = substream(seed, "gamma")
        params = AlphaEtaParams(S=float(blk["photons"]), M=int(blk["bases"]))
        est = attacks.empirical_gamma_lambda(
            params, int(blk["trials"]), rng, epsilon=float(blk.get("epsilon", 1e-3))
        )
        doc["gamma"] = dataclasses.asdict(est)

    if "kpa" in cfg:
        blk = cfg["kpa"]
        for k in ("key_length", "taps", "bases", "photons", "window", "trials"):
            _require(k in blk, f"attack.kpa.{k}", "required")
        n_symbols = int(blk.get("symbols", blk["key_length"]))
        fixed_seed = int(blk["seed_hex"], 16) if "seed_hex" in blk else 0
        tasks = [
            (seed, i, int(blk["key_length"]), tuple(blk["taps"]), int(blk["bases"]),
             float(blk["photons"]), float(blk["window"]), n_symbols, fixed_seed)
            for i in range(int(blk["trials"]))
        ]
        rows = _map_ordered(_kpa_trial, tasks, args.threads)
        recall = sum(r["planted_recovered"] for r in rows) / len(rows)
        works = [r["work"] for r in rows]
        threshold = float(blk.get("recall_threshold", 0.95))
        doc["kpa"] = {
            "params": rows[0]["report"]["params"],
            "trials": len(rows),
            "recall": recall,
            "window_too_small": recall < threshold,
            "recall_threshold": threshold,
            "mean_work": sum(works) / len(works),
            "max_work": max(works),
            "predicted_complexity": rows[0]["report"]["predicted_complexity"],
            "recovered_seeds_hex_first_trial": rows[0]["report"]["recovered_seeds_hex"],
        }
        if doc["kpa"]["window_too_small"]:
            print(f"warning: recall {recall:.3f} below {threshold}; "
                  f"the candidate window is too small", file=sys.stderr)
        csv = "trial,work,n_recovered,planted_recovered\n" + "".join(
            f"{r['trial']},{r['work']},{r['n_recovered']},{r['planted_recovered']}\n"
            for r in rows
        )
        _write(out / "kpa_trials.csv", csv, outputs)
        print(f"kpa recall {recall:.3f}, mean work {doc['kpa']['mean_work']:.1f}")

    if "kpa_scaling" in cfg:
        blk = cfg["kpa_scaling"]
        for k in ("key_lengths", "taps", "bases", "photons", "window", "trials"):
            _require(k in blk, f"attack.kpa_scaling.{k}", "required")
        m = int(blk["bases"]).bit_length() - 1
        scaling_rows = []
        for key_len in blk["key_lengths"]:
            taps = blk["taps"][str(key_len)]
            n_symbols = max(int(key_len), 2 * m)
            tasks = [
                (seed, i, int(key_len), tuple(taps), int(blk["bases"]),
                 float(blk["photons"]), float(blk["window"]), n_symbols, 0)
                for i in range(int(blk["trials"]))
            ]
            rows = _map_ordered(_kpa_trial, tasks, args.threads)
            pivots = math.ceil(int(key_len) / m)
            mean_work = sum(r["work"] for r in rows) / len(rows)
            predicted = sum(
                r["report"]["predicted_complexity"] for r in rows
            ) / len(rows)
            scaling_rows.append(
                {"key_length": int(key_len), "pivots": pivots,
                 "mean_work": mean_work, "predicted": predicted}
            )
        doc["kpa_scaling"] = scaling_rows
        csv = "key_length,pivots,mean_work,predicted\n" + "".join(
            f"{r['key_length']},{r['pivots']},{r['mean_work']!r},{r['predicted']!r}\n"
            for r in scaling_rows
        )
        _write(out / "kpa_scaling.csv", csv, outputs)
        plotting.line_plot(
            out / "kpa_scaling.png", [r["key_length"] for r in scaling_rows],
            {"measured work": ([r["mean_work"] for r in scaling_rows], "o-"),
             "predicted": ([r["predicted"] for r in scaling_rows], "--")},
            xlabel="key length (bits)", ylabel="linear-system solves",
            title="assisted brute-force work scaling", logy=True,
        )
        outputs.append("kpa_scaling.png")

    _write(out / "attack_report.json", json.dumps(doc, indent=2), outputs)
    _finish(out, "attack", cfg, seed, started, outputs)
    return 0


# ---------------------------------------------------------------- nishioka

def cmd_nishioka(args) -> int:
    cfg = _load_config(args, "nishioka")
    if args.photons_grid:
        cfg["s_grid"] = _float_list(args.photons_grid)
    _merge_flag(cfg, "bases", args.bases)
    _merge_flag(cfg, "trials", args.trials)
    cfg.setdefault("bases", 8)
    cfg.setdefault("trials", 1_000_000)
    _require(bool(cfg.get("s_grid")), "nishioka.s_grid", "non-empty grid required")
    seed = _need_seed(args)
    out = _out_dir(args)
    started = time.time()
    outputs: list = []

    reports = []
    for i, s in enumerate(cfg["s_grid"]):
        rng = substream(seed, "nishioka", i)
        params = AlphaEtaParams(S=float(s), M=int(cfg["bases"]))
        reports.append(attacks.nishioka_reduction_demo(params, int(cfg["trials"]), rng))

    csv_lines = ["s,bases,trials,mc_failure_rate,reference_rate,gaussian_reference"]
    for r in reports:
        csv_lines.append(
            f"{r.S!r},{r.M},{r.trials},{r.mc_failure_rate!r},"
            f"{r.reference_rate!r},{r.gaussian_reference!r}"
        )
    _write(out / "nishioka.csv", "\n".join(csv_lines) + "\n", outputs)
    doc = [dataclasses.asdict(r) for r in reports]
    _write(out / "nishioka.json", json.dumps(doc, indent=2), outputs)
    plotting.line_plot(
        out / "nishioka.png", [r.S for r in reports],
        {
            "F failure MC": ([max(r.mc_failure_rate, 1e-12) for r in reports], "o"),
            "e^{-S}/2 (reference)": ([max(r.reference_rate, 1e-300) for r in reports], "--"),
            "Q(2 sqrt S)": ([max(r.gaussian_reference, 1e-300) for r in reports], ":"),
        },
        xlabel="mean photon number S", ylabel="decode-with-key failure rate",
        title="half-circle reduction: F failure", logy=True,
    )
    outputs.append("nishioka.png")
    for r in reports:
        print(f"S={r.S:g}: F failure {r.mc_failure_rate:.3g} "
              f"(reference e^-S/2 = {r.reference_rate:.3g}, "
              f"Gaussian crossing {r.gaussian_reference:.3g})")
    first = reports[0]
    if first.counterexample:
        j1, j2, z = first.counterexample
        print(
            f"counterexample: wedges {j1} and {j2} share the half-circle bit, "
            f"keystream {z}, decodings differ ({first.n_counterexamples} such tuples)"
        )
    _finish(out, "nishioka", cfg, seed, started, outputs)
    return 0


# ---------------------------------------------------------------- homophonic

def cmd_homophonic(args) -> int:
    cfg = _load_config(args, "homophonic")
    _merge_flag(cfg, "mode", args.mode)
    _require(cfg.get("mode") in ("build", "encode", "decode", "verify"),
             "homophonic.mode", "one of build/encode/decode/verify")
    mode = cfg["mode"]
    out = _out_dir(args)
    started = time.time()
    outputs: list = []

    if mode == "build":
        _require(args.prior is not None, "homophonic.prior", "--prior file required")
        _require(args.block_bits is not None, "homophonic.block_bits", "--block-bits required")
        prior_doc = json.loads(Path(args.prior).read_text())
        prior = {int(k): v for k, v in prior_doc.items()}
        code = homophonic.build_code(
            {k: _as_fraction(v) for k, v in prior.items()}, int(args.block_bits)
        )
        _write(out / "code.json", code.to_json(), outputs)
        print(f"code over {len(code.symbols)} symbols, {code.block_bits} bits per block, "
              f"expansion {code.expansion_factor():.3f}")
    else:
        _require(args.code is not None, "homophonic.code", "--code file required")
        code = homophonic.HomophonicCode.from_json(Path(args.code).read_text())
        if mode == "encode":
            seed = _need_seed(args)
            _require(args.infile is not None and args.outfile is not None,
                     "homophonic.io", "--in and --out-file required")
            data = Path(args.infile).read_bytes()
            blocks = homophonic.encode(list(data), code, substream(seed, "homophonic"))
            Path(args.outfile).write_bytes(homophonic.pack_blocks(blocks, code.block_bits))
            print(f"encoded {len(data)} symbols")
        elif mode == "decode":
            _require(args.infile is not None and args.outfile is not None,
                     "homophonic.io", "--in and --out-file required")
            payload = Path(args.infile).read_bytes()
            blocks = homophonic.unpack_blocks(payload, code.block_bits)
            symbols = homophonic.decode(blocks, code)
            Path(args.outfile).write_bytes(bytes(symbols))
            print(f"decoded {len(symbols)} symbols")
        else:  # verify
            seed = _need_seed(args)
            trials = int(cfg.get("trials", 1_000_000))
            rng = substream(seed, "homophonic-verify")
            probs = np.array([float(p) for p in code.prior])
            syms = rng.choice(len(code.symbols), trials, p=probs)
            blocks = homophonic.encode([code.symbols[i] for i in syms], code, rng)
            counts = np.bincount(blocks, minlength=code.n_blocks)
            from scipy.stats import chisquare

            chi2, pvalue = chisquare(counts)
            uniform = homophonic.verify_uniformity(code)
            doc = {
                "symbolic_uniformity": uniform,
                "trials": trials,
                "chi2": float(chi2),
                "p_value": float(pvalue),
                "expansion_factor": code.expansion_factor(),
            }
            _write(out / "homophonic_verify.json", json.dumps(doc, indent=2), outputs)
            csv = "block,count,frequency\n" + "".join(
                f"{b},{int(c)},{c / trials!r}\n" for b, c in enumerate(counts)
            )
            _write(out / "homophonic_freq.csv", csv, outputs)
            plotting.bar_plot(
                out / "homophonic_freq.png", list(range(code.n_blocks)),
                counts / trials, xlabel="block value", ylabel="frequency",
                title=f"output block frequencies ({trials} symbols)",
            )
            outputs.append("homophonic_freq.png")
            print(f"symbolic uniformity: {uniform}, chi-square p = {pvalue:.4g}")
    _finish(out, "homophonic", cfg, args.seed, started, outputs)
    return 0


def _as_fraction(v):
    from fractions import Fraction

    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return Fraction(v[0], v[1])
    return Fraction(v)


# ---------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alphaeta", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file (block named after the subcommand)")
        p.add_argument("--seed", type=int, help="master seed (mandatory for stochastic runs)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")

    p = sub.add_parser("analyze", help="exact analysis of a cipher table file")
    common(p)
    p.add_argument("--table", help="cipher table JSON (default: bundled example)")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("bounds", help="closed-form security estimates")
    common(p)
    p.add_argument("--key-length", type=int, dest="key_length")
    p.add_argument("--bases", type=int)
    p.add_argument("--photons", type=float)
    p.add_argument("--eta", type=float)
    p.set_defaults(fn=cmd_bounds)

    p = sub.add_parser("simulate", help="receiver/attacker BER sweep over S")
    common(p)
    p.add_argument("--photons-grid", dest="photons_grid", help="comma-separated S values")
    p.add_argument("--bases", type=int)
    p.add_argument("--eta", type=float)
    p.add_argument("--trials", type=int)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("attack", help="attack bench driven by a config file")
    common(p)
    p.set_defaults(fn=cmd_attack)

    p = sub.add_parser("nishioka", help="half-circle reduction demo")
    common(p)
    p.add_argument("--photons-grid", dest="photons_grid", help="comma-separated S values")
    p.add_argument("--bases", type=int)
    p.add_argument("--trials", type=int)
    p.set_defaults(fn=cmd_nishioka)

    p = sub.add_parser("homophonic", help="homophonic codec: build/encode/decode/verify")
    common(p)
    p.add_argument("--mode", choices=("build", "encode", "decode", "verify"))
    p.add_argument("--prior", help="prior JSON for build (symbol -> probability)")
    p.add_argument("--block-bits", type=int, dest="block_bits")
    p.add_argument("--code", help="code JSON for encode/decode/verify")
    p.add_argument("--in", dest="infile", help="input file")
    p.add_argument("--out-file", dest="outfile", help="output file")
    p.set_defaults(fn=cmd_homophonic)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
