"""Eve's attack bench.

Individual-attack state discrimination, wedge-based candidate keystream
extraction, empirical randomization parameters, assisted brute-force seed
recovery against an LFSR expander, the half-circle ciphertext error, and
the half-circle (single-bit) reduction analysis.

Eve is modeled at the transmitter: her received energy is the full S.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from alphaeta import fock
from alphaeta.gf2 import Gf2Solver, gf2_rank
from alphaeta.keystream import LfsrConfig, keystream_linear_forms, lfsr_symbols
from alphaeta.measurement import (
    HETERODYNE_QUAD_STD,
    heterodyne_phases,
    q_function,
    wedge_quantize_array,
)
from alphaeta.signal import AlphaEtaParams, mapper_steps

TWO_PI = 2.0 * math.pi


class FockCutoffError(RuntimeError):
    pass


class InsufficientTrialsError(RuntimeError):
    pass


def _bit_phases(S: float, M: int, bit: int, phase_offset: float = 0.0) -> np.ndarray:
    z = np.arange(M)
    steps = mapper_steps(np.full(M, bit), z, M)
    return steps * (math.pi / M) + phase_offset


def individual_attack_error(S: float, M: int, n_cutoff: int | None = None, *,
                            check_cutoff: bool = True, tol: float = 1e-4,
                            phase_offset: float = 0.0) -> float:
    """Optimal per-bit error for a keyless attacker, by dense eigensolve.

    The attacker must distinguish the two M-state mixtures rho^0 and rho^1
    (uniform over the keystream); the optimum is 1/2 - ||rho0 - rho1||_1/4.
    The result is recomputed at 1.5x the Fock cutoff and a drift above
    ``tol`` raises FockCutoffError.  ``phase_offset`` rotates the whole
    constellation; the error is invariant under it.
    """
    if n_cutoff is None:
        n_cutoff = fock.default_cutoff(S)

    def compute(dim: int) -> float:
        rho0 = fock.mixture_density(S, _bit_phases(S, M, 0, phase_offset), dim)
        rho1 = fock.mixture_density(S, _bit_phases(S, M, 1, phase_offset), dim)
        return fock.helstrom_error(rho0, rho1)

    p = compute(n_cutoff + 1)
    if check_cutoff:
        p_big = compute(int(math.ceil(1.5 * n_cutoff)) + 1)
        if abs(p - p_big) > tol:
            raise FockCutoffError(
                f"individual attack error moved {abs(p - p_big):.2e} when the "
                f"cutoff grew from {n_cutoff} to {math.ceil(1.5 * n_cutoff)}"
            )
        return p_big
    return p


@dataclass(frozen=True)
class EveHalfcircleEstimate:
    """Per-qumode error of the half-circle (single-bit) ciphertext.

    ``estimate`` follows the uniform-spread noise accounting behind the
    closed form 2/(pi sqrt(S)): a qumode's half-circle bit counts as
    erroneous when the transmitted phase lies within one phase-noise spread
    (default 1/sqrt(S)) of a half-circle boundary, i.e. when the noise can
    place the outcome on either side.  ``gaussian_crossing`` is the plain
    Gaussian boundary-crossing rate of a committed heterodyne decision,
    which is about five times smaller; both are reported.
    """

    estimate: float
    gaussian_crossing: float
    closed_form: float
    spread: float
    trials: int

    @property
    def stderr(self) -> float:
        return math.sqrt(max(self.estimate * (1 - self.estimate), 1e-30) / self.trials)


def eve_halfcircle_error(S: float, trials: int, rng: np.random.Generator, *,
                         spread: float | None = None) -> EveHalfcircleEstimate:
    """Monte Carlo estimate of Eve's half-circle ciphertext-bit error.

    States are uniform on the circle (the continuous limit of the 2M
    constellation).  Raises when ``trials`` cannot resolve the expected
    rate at three sigma.
    """
    if S <= 0:
        raise ValueError("S must be > 0")
    closed = 2.0 / (math.pi * math.sqrt(S))
    if trials * closed < 9.0:
        raise InsufficientTrialsError(
            f"{trials} trials cannot resolve an expected rate of {closed:.3g} "
            f"at three sigma; need at least {math.ceil(9.0 / closed)}"
        )
    if spread is None:
        spread = 1.0 / math.sqrt(S)
    theta = rng.uniform(0.0, TWO_PI, trials)
    # Distance to the nearest of the two boundaries at phase 0 and pi.
    dist = np.abs(np.mod(theta + math.pi / 2.0, math.pi) - math.pi / 2.0)
    ambiguous = float(np.mean(dist < spread))
    phases = heterodyne_phases(S, theta, rng)
    crossing = float(np.mean((theta < math.pi) != (phases < math.pi)))
    return EveHalfcircleEstimate(
        estimate=ambiguous, gaussian_crossing=crossing,
        closed_form=closed, spread=spread, trials=trials,
    )


def heterodyne_sigma_wedges(params: AlphaEtaParams) -> float:
    """Heterodyne phase-noise standard deviation in wedge units."""
    return (HETERODYNE_QUAD_STD / math.sqrt(params.S)) / (math.pi / params.M)


@dataclass(frozen=True)
class CandidateSet:
    """Keystream values compatible with (known bit, observed wedge)."""

    x: int
    wedge: int
    window: float
    values: tuple[int, ...]
    weights: tuple[float, ...]

    def __contains__(self, z: int) -> bool:
        return z in self.values


def candidate_keystreams(x: int, wedge: int, params: AlphaEtaParams,
                         window: float, *, sigma_wedges: float | None = None) -> CandidateSet:
    """All z whose state wedge lies within ``window`` wedge steps of the outcome.

    Weights are proportional to the Gaussian phase-noise mass of the
    observed wedge under each candidate state; the true z is always in the
    set when its phase error stays within the window.
    """
    M = params.M
    if not 0 <= wedge < 2 * M:
        raise ValueError("wedge index out of range [0, 2M)")
    if sigma_wedges is None:
        sigma_wedges = heterodyne_sigma_wedges(params)
    z = np.arange(M)
    steps = mapper_steps(np.full(M, x), z, M)
    offset = (wedge - steps + M) % (2 * M) - M          # signed, in [-M, M)
    inside = np.abs(offset) <= window
    values = z[inside]
    off = offset[inside].astype(float)
    lo = (off - 0.5) / sigma_wedges
    hi = (off + 0.5) / sigma_wedges
    mass = 0.5 * (erf(hi / math.sqrt(2)) - erf(lo / math.sqrt(2)))
    if mass.sum() > 0:
        mass = mass / mass.sum()
    return CandidateSet(x=x, wedge=wedge, window=window,
                        values=tuple(int(v) for v in values),
                        weights=tuple(float(w) for w in mass))


@dataclass(frozen=True)
class EmpiricalRandomization:
    gamma_emp: int
    lambda_emp: int
    gamma_closed_form: float
    relation_gap: int          # |(Lambda+1) - 2(Gamma+1)| on the 2M-arc ciphertext
    epsilon: float
    trials: int
    gamma_cell_counts: tuple[int, int]   # (min, max) support size over (x, j) cells
    lambda_cell_counts: tuple[int, int]  # (min, max) support size over (x, z) cells


def empirical_gamma_lambda(params: AlphaEtaParams, trials: int,
                           rng: np.random.Generator, *, epsilon: float = 1e-3,
                           batch: int = 2_000_000) -> EmpiricalRandomization:
    """Measured per-symbol randomization under heterodyne on the 2M-arc ciphertext.

    Gamma_emp: over observed (bit, wedge) cells, the smallest count of
    keystream values holding at least ``epsilon`` of the cell's posterior
    mass, minus one.  Lambda_emp: over (bit, keystream) cells, the smallest
    count of wedges reached with probability at least ``epsilon``, minus
    one.  Raises when the cells are too thin to resolve ``epsilon``.
    """
    M, two_m = params.M, 2 * params.M
    counts = np.zeros(2 * two_m * M, dtype=np.int64)
    remaining = trials
    while remaining > 0:
        n = min(batch, remaining)
        x = rng.integers(0, 2, n)
        z = rng.integers(0, M, n)
        steps = mapper_steps(x, z, M)
        phases = heterodyne_phases(params.S, steps * (math.pi / M), rng)
        j = wedge_quantize_array(phases, M)
        idx = (x.astype(np.int64) * two_m + j) * M + z
        counts += np.bincount(idx, minlength=counts.size)
        remaining -= n
    cube = counts.reshape(2, two_m, M)

    min_cell = math.ceil(1.0 / epsilon)

    def support_stats(mat: np.ndarray, require_all: bool) -> tuple[int, int]:
        totals = mat.sum(axis=1)
        ok = totals >= min_cell
        if require_all and not ok.all():
            raise InsufficientTrialsError(
                f"{int((~ok).sum())} cells hold fewer than {min_cell} samples; "
                f"increase trials to resolve epsilon={epsilon}"
            )
        if not ok.any():
            raise InsufficientTrialsError(
                f"no cell reached {min_cell} samples at {trials} trials"
            )
        sel = mat[ok]
        thr = np.maximum(epsilon * totals[ok][:, None], 1.0)
        sizes = (sel >= thr).sum(axis=1)
        return int(sizes.min()), int(sizes.max())

    gamma_min, gamma_max = support_stats(cube.reshape(2 * two_m, M), require_all=False)
    lam_min, lam_max = support_stats(
        cube.transpose(0, 2, 1).reshape(2 * M, two_m), require_all=True
    )
    gamma_emp = gamma_min - 1
    lambda_emp = lam_min - 1
    closed = M / (math.pi * math.sqrt(params.S))
    return EmpiricalRandomization(
        gamma_emp=gamma_emp,
        lambda_emp=lambda_emp,
        gamma_closed_form=closed,
        relation_gap=abs((lambda_emp + 1) - 2 * (gamma_emp + 1)),
        epsilon=epsilon,
        trials=trials,
        gamma_cell_counts=(gamma_min, gamma_max),
        lambda_cell_counts=(lam_min, lam_max),
    )


@dataclass
class SearchReport:
    """Outcome of one assisted brute-force seed search."""

    recovered_seeds: list[int]
    work: int                      # linear-system solves performed
    pivot_symbols: list[int]       # 1-based indices of the pivot symbols
    pivot_candidate_counts: list[int]
    predicted_work: float          # (mean pivot candidates)^(number of pivots)
    safety_factor: float = 2.0
    params: dict = field(default_factory=dict)

    @property
    def recovered_seeds_hex(self) -> list[str]:
        return [f"{s:x}" for s in self.recovered_seeds]

    def as_dict(self) -> dict:
        return {
            "params": self.params,
            "work": self.work,
            "recovered_seeds_hex": self.recovered_seeds_hex,
            "pivot_symbols": self.pivot_symbols,
            "pivot_candidate_counts": self.pivot_candidate_counts,
            "predicted_complexity": self.predicted_work,
            "safety_factor": self.safety_factor,
        }


def kpa_lfsr_search(x_bits, wedges, lfsr: LfsrConfig, params: AlphaEtaParams,
                    window: float, *, max_combinations: int = 2_000_000) -> SearchReport:
    """Assisted brute-force seed recovery from known plaintext and wedges.

    Per symbol, the observed wedge narrows the keystream symbol to a
    candidate set; the seed is linear in the keystream, so fixing one
    candidate per pivot symbol makes the seed the solution of a GF(2)
    system.  Every pivot combination is solved (one precomputed elimination,
    one back-substitution each) and surviving seeds are verified against
    all remaining symbols' candidate sets.  If every true keystream symbol
    lies within its window, the planted seed is among the results.
    """
    x_arr = np.asarray(x_bits, dtype=np.int64)
    j_arr = np.asarray(wedges, dtype=np.int64)
    if x_arr.shape != j_arr.shape:
        raise ValueError("plaintext and wedge sequences must have equal length")
    n = x_arr.size
    L, m = lfsr.length, params.m
    if n * m < L:
        raise ValueError(f"{n} symbols supply {n * m} keystream bits < key length {L}")

    cands = [
        candidate_keystreams(int(x_arr[i]), int(j_arr[i]), params, window)
        for i in range(n)
    ]
    cand_sets = [frozenset(c.values) for c in cands]

    # Pivot selection: earliest symbols whose stacked linear forms reach
    # full rank; deterministic and independent of the observations.
    pivots: list[int] = []
    rows: list[int] = []
    for i in range(1, n + 1):
        forms = keystream_linear_forms(lfsr, i, m)
        if gf2_rank(rows + forms, L) > gf2_rank(rows, L):
            pivots.append(i)
            rows.extend(forms)
        if gf2_rank(rows, L) == L:
            break
    if gf2_rank(rows, L) < L:
        raise ValueError("linear forms of the available symbols never reach full rank")

    pivot_counts = [len(cands[i - 1].values) for i in pivots]
    n_combos = 1
    for c in pivot_counts:
        n_combos *= c
    if n_combos > max_combinations:
        raise RuntimeError(
            f"{n_combos} pivot combinations exceed the cap {max_combinations}"
        )
    mean_count = (sum(pivot_counts) / len(pivot_counts)) if pivot_counts else 0.0
    predicted = mean_count ** len(pivots)

    solver = Gf2Solver(rows, L)
    work = 0
    found: list[int] = []
    for combo in itertools.product(*(cands[i - 1].values for i in pivots)):
        # Pack the chosen symbols' bits (most significant first) as the RHS.
        rhs = 0
        row = 0
        for z in combo:
            for b in range(m):
                if (z >> (m - 1 - b)) & 1:
                    rhs |= 1 << row
                row += 1
        work += 1
        seed = solver.solve(rhs)
        if seed is None or seed == 0:
            continue
        stream = lfsr_symbols(lfsr.with_seed(seed), n, m)
        if all(int(stream[i]) in cand_sets[i] for i in range(n)):
            if seed not in found:
                found.append(seed)
    return SearchReport(
        recovered_seeds=found,
        work=work,
        pivot_symbols=pivots,
        pivot_candidate_counts=pivot_counts,
        predicted_work=predicted,
        params={
            "key_length": L, "m": m, "M": params.M, "S": params.S,
            "window": window, "symbols": n,
        },
    )


def halfbit_decode_table(M: int) -> np.ndarray:
    """F[j, z]: the bit whose mapper phase is nearer wedge j, given basis z.

    The perpendicular tie (wedge exactly between the two states) resolves
    to bit 0.
    """
    j = np.arange(2 * M)[:, None]
    z = np.arange(M)[None, :]
    s0 = mapper_steps(np.zeros((1, M), dtype=np.int64), z, M)
    d0 = np.minimum((j - s0) % (2 * M), (s0 - j) % (2 * M))
    d1 = M - d0
    return (d1 < d0).astype(np.int64)


@dataclass(frozen=True)
class NishiokaReport:
    """Half-circle reduction analysis.

    ``mc_failure_rate`` is the Monte Carlo rate at which the wedge-plus-key
    decoder F fails; ``reference_rate`` is the quoted e^{-S}/2 value and
    ``gaussian_reference`` the plain Gaussian half-plane crossing Q(2 sqrt S)
    under this package's noise convention.  ``counterexample`` is a tuple
    (j, j', z) with equal half-circle bits and equal keystream symbol but
    different decodings: a constructive witness that the single half-circle
    bit plus the key cannot decrypt, i.e. the bit-valued reduction of the
    2M-arc ciphertext destroys decryptability.
    """

    S: float
    M: int
    trials: int
    mc_failure_rate: float
    reference_rate: float
    gaussian_reference: float
    counterexample: tuple[int, int, int] | None
    n_counterexamples: int
    g_values: tuple[int, int] | None   # G_j(z), G_j'(z) at the counterexample

    @property
    def mc_stderr(self) -> float:
        p = max(self.mc_failure_rate, 1.0 / self.trials)
        return math.sqrt(p * (1 - p) / self.trials)


def nishioka_reduction_demo(params: AlphaEtaParams, trials: int,
                            rng: np.random.Generator, *,
                            batch: int = 2_000_000) -> NishiokaReport:
    """Decode-with-key failure rate of F plus the non-reducibility certificate.

    F_j(z) is reconstructed as nearest-state decoding of the wedge outcome;
    l_j is the fixed half-circle indicator of j and G_j(z) = F_j(z) XOR l_j.
    The exhaustive search certifies that (l, z) alone cannot determine the
    plaintext and that G depends on the wedge as well as the keystream.
    """
    M, two_m = params.M, 2 * params.M
    F = halfbit_decode_table(M)
    failures = 0
    remaining = trials
    while remaining > 0:
        nb = min(batch, remaining)
        x = rng.integers(0, 2, nb)
        z = rng.integers(0, M, nb)
        steps = mapper_steps(x, z, M)
        phases = heterodyne_phases(params.S, steps * (math.pi / M), rng)
        j = wedge_quantize_array(phases, M)
        failures += int((F[j, z] != x).sum())
        remaining -= nb

    l = (np.arange(two_m) >= M).astype(np.int64)
    counterexample = None
    n_counter = 0
    g_values = None
    for j1 in range(two_m):
        for j2 in range(j1 + 1, two_m):
            if l[j1] != l[j2]:
                continue
            diff = np.nonzero(F[j1] != F[j2])[0]
            n_counter += len(diff)
            if counterexample is None and len(diff):
                z0 = int(diff[0])
                counterexample = (j1, j2, z0)
                g_values = (int(F[j1, z0] ^ l[j1]), int(F[j2, z0] ^ l[j2]))
    return NishiokaReport(
        S=params.S, M=M, trials=trials,
        mc_failure_rate=failures / trials,
        reference_rate=0.5 * math.exp(-params.S),
        gaussian_reference=q_function(2.0 * math.sqrt(params.S)),
        counterexample=counterexample,
        n_counterexamples=n_counter,
        g_values=g_values,
    )
