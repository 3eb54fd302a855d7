"""Closed-form security estimates for the alpha-eta scheme.

Every quantitative reference formula lives here so simulations and tests can
print measured and predicted values side by side:

* wedge counts N_het = M/(pi sqrt(S)), N_phase = N_het/2 and the
  randomization parameters they imply,
* unicity-distance lower bounds n0 (ciphertext-only) and n1 (known
  plaintext) under the uniform-wedge noise model,
* the assisted brute-force search complexity Gamma^(|K|/m),
* receiver and attacker error formulas.

The wedge counts are estimates, so Gamma/Lambda enter the bound formulas as
reals; reported distances round *up* (a lower bound must not shrink).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict


@dataclass(frozen=True)
class WedgeCounts:
    n_het: float
    n_phase: float
    gamma_het: float
    gamma_phase: float
    gamma_het_rounded: int
    no_randomization: bool


def wedge_counts(S: float, M: int) -> WedgeCounts:
    """Keystream values covered by quantum noise under both measurements.

    N_het = M / (pi sqrt(S)) and N_phase = N_het / 2.  The key-redundancy
    parameter is quoted at leading order, Gamma_het ~ N_het (the exact
    N_het - 1 differs by one count, below the resolution of the estimate);
    when less than one keystream value is covered it clamps to zero and the
    no-randomization flag is set.
    """
    if S <= 0:
        raise ValueError("S must be > 0")
    if M < 2:
        raise ValueError("M must be >= 2")
    n_het = M / (math.pi * math.sqrt(S))
    n_phase = n_het / 2.0
    no_rand = n_het < 1.0
    gamma_het = 0.0 if no_rand else n_het
    gamma_phase = gamma_het / 2.0
    return WedgeCounts(
        n_het=n_het,
        n_phase=n_phase,
        gamma_het=gamma_het,
        gamma_phase=gamma_phase,
        gamma_het_rounded=int(round(gamma_het)),
        no_randomization=no_rand,
    )


@dataclass(frozen=True)
class UnicityBounds:
    n0_real: float
    n1_real: float
    n0: int | None            # ceil, None when infinite
    n1: int | None
    n0_infinite: bool
    n1_infinite: bool


def unicity_bounds(key_len: float, M: int, gamma: float, lam: float) -> UnicityBounds:
    """Lower bounds n0 >= |K| / log2(M/(Lambda+1)) and n1 >= |K| / log2(M/(Gamma+1)).

    A non-positive denominator means the per-symbol channel conveys nothing
    (full randomization); the corresponding bound is reported infinite.
    """
    if key_len <= 0:
        raise ValueError("key_len must be > 0")

    def one(extra: float) -> tuple[float, int | None, bool]:
        denom = math.log2(M / (extra + 1.0)) if extra + 1.0 < M else 0.0
        if extra + 1.0 >= M or denom <= 0:
            return math.inf, None, True
        real = key_len / denom
        return real, int(math.ceil(real - 1e-12)), False

    n0_real, n0, inf0 = one(lam)
    n1_real, n1, inf1 = one(gamma)
    return UnicityBounds(n0_real, n1_real, n0, n1, inf0, inf1)


def search_complexity(gamma: float, key_len: float, m: int) -> float:
    """log2 of the assisted brute-force work Gamma^(|K|/m).

    Gamma <= 1 leaves nothing to enumerate per symbol; the exponent is 0.
    """
    if m <= 0:
        raise ValueError("m must be >= 1")
    if gamma <= 1.0:
        return 0.0
    return (key_len / m) * math.log2(gamma)


def capacity_unicity(key_len: float, capacity_bits: float) -> float:
    """n >= |K| / C from the converse to the coding theorem.

    With C = log2(M/(Gamma+1)) this reproduces the known-plaintext bound.
    Non-positive capacity gives an infinite bound.
    """
    if capacity_bits <= 0:
        return math.inf
    return key_len / capacity_bits


@dataclass(frozen=True)
class ErrorFormulas:
    p_bob_helstrom: float       # exact two-state optimum at received energy
    p_bob_approx: float         # e^{-4 eta S} / 4
    lambda_prime_het: float     # e^{-S} / 2: attacker decode-with-key, heterodyne
    lambda_prime_phase: float   # e^{-2S} / 2: same, canonical phase
    p_eve_ciphertext: float     # 2 / (pi sqrt(S)): half-circle ciphertext bit


def _exp(x: float) -> float:
    # exp underflows to 0.0 below ~exp(-745); fine for reporting.
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def error_formulas(S: float, eta_S: float) -> ErrorFormulas:
    if S < 0 or eta_S < 0:
        raise ValueError("energies must be >= 0")
    return ErrorFormulas(
        p_bob_helstrom=0.5 * (1.0 - math.sqrt(1.0 - _exp(-4.0 * eta_S))),
        p_bob_approx=0.25 * _exp(-4.0 * eta_S),
        lambda_prime_het=0.5 * _exp(-S),
        lambda_prime_phase=0.5 * _exp(-2.0 * S),
        p_eve_ciphertext=(2.0 / (math.pi * math.sqrt(S))) if S > 0 else 0.5,
    )


@dataclass(frozen=True)
class BoundsReport:
    key_len: int
    M: int
    S: float
    eta: float
    m: int
    n_het: float
    n_phase: float
    gamma_het: float
    gamma_phase: float
    gamma_rounded: int
    lambda_2m_arc: int          # Lambda + 1 = 2(Gamma + 1) on the 2M-arc ciphertext
    no_randomization: bool
    n0_bound: int | None
    n1_bound: int | None
    n0_real: float
    n1_real: float
    complexity_log2: float
    zero_complexity: bool
    p_e_bob: float
    p_e_bob_approx: float
    lambda_prime_het: float
    lambda_prime_phase: float
    p_b_eve: float
    capacity_bound_n: float

    def as_dict(self) -> dict:
        return asdict(self)

    def as_text(self) -> str:
        def fmt(v):
            if v is None:
                return "infinite"
            if isinstance(v, float):
                return f"{v:.6g}"
            return str(v)

        rows = [
            ("key length |K| (bits)", self.key_len),
            ("bases M", self.M),
            ("bits per symbol m", self.m),
            ("mean photon number S", self.S),
            ("transmittance eta", self.eta),
            ("N_het", self.n_het),
            ("N_phase", self.n_phase),
            ("Gamma_het", self.gamma_het),
            ("Gamma_phase", self.gamma_phase),
            ("Gamma (rounded)", self.gamma_rounded),
            ("Lambda + 1 (2M-arc)", self.lambda_2m_arc),
            ("n0 bound (ciphertext-only)", self.n0_bound),
            ("n1 bound (known plaintext)", self.n1_bound),
            ("search complexity log2", self.complexity_log2),
            ("P_e Bob (Helstrom)", self.p_e_bob),
            ("P_e Bob ~ exp(-4 eta S)/4", self.p_e_bob_approx),
            ("lambda' heterodyne", self.lambda_prime_het),
            ("lambda' phase", self.lambda_prime_phase),
            ("P_b Eve (half circle)", self.p_b_eve),
            ("capacity bound n", self.capacity_bound_n),
        ]
        width = max(len(name) for name, _ in rows)
        return "\n".join(f"{name:<{width}}  {fmt(value)}" for name, value in rows)


def build_bounds_report(key_len: int, M: int, S: float, eta: float = 1.0) -> BoundsReport:
    """Full closed-form report for one parameter set.

    Gamma feeds the distance and complexity formulas rounded to the nearest
    integer count, with Lambda + 1 = 2(Gamma + 1) for the 2M-arc ciphertext.
    """
    m = M.bit_length() - 1
    if M != 1 << m:
        raise ValueError("M must be a power of two")
    wc = wedge_counts(S, M)
    gamma_r = wc.gamma_het_rounded
    lam = 2 * gamma_r + 1
    ub = unicity_bounds(key_len, M, gamma_r, lam)
    errs = error_formulas(S, eta * S)
    comp = search_complexity(gamma_r, key_len, m)
    capacity = math.log2(M / (gamma_r + 1.0)) if gamma_r + 1.0 < M else 0.0
    return BoundsReport(
        key_len=key_len, M=M, S=S, eta=eta, m=m,
        n_het=wc.n_het, n_phase=wc.n_phase,
        gamma_het=wc.gamma_het, gamma_phase=wc.gamma_phase,
        gamma_rounded=gamma_r, lambda_2m_arc=lam + 1,
        no_randomization=wc.no_randomization,
        n0_bound=ub.n0, n1_bound=ub.n1, n0_real=ub.n0_real, n1_real=ub.n1_real,
        complexity_log2=comp, zero_complexity=gamma_r < 1,
        p_e_bob=errs.p_bob_helstrom, p_e_bob_approx=errs.p_bob_approx,
        lambda_prime_het=errs.lambda_prime_het,
        lambda_prime_phase=errs.lambda_prime_phase,
        p_b_eve=errs.p_eve_ciphertext,
        capacity_bound_n=capacity_unicity(key_len, capacity),
    )
