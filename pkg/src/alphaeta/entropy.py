"""Exact entropy profiles of finite random ciphers by full enumeration.

For every sequence length n up to ``n_max`` the joint distribution over
(key, plaintext sequence, ciphertext sequence) is enumerated exactly and the
conditional entropies relevant to attacks are computed, along with the
derived distances:

    n0      first n with H(K | Y_n) = 0            (ciphertext-only break)
    n1      first n with H(K | X_n Y_n) = 0 for every plaintext sequence
    n1_bar  first n with H(K | X_n = x_n, Y_n) = 0 for some x_n
    n_d     first n with H(Y_n | X_n) = H(K)       (nondegeneracy)

"Zero" means below ``zero_tol`` bits (default 1e-9), absorbing float noise
from the enumeration itself.  Enumeration is refused, never truncated, when
the configured budget is exceeded.

A ``key_schedule`` turns the per-symbol table into a stream cipher: the
enumerated key k is a seed and ``key_schedule(k, i)`` supplies the table
key used at position i (e.g. LFSR keystream symbols).
"""

from __future__ import annotations

import io
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from alphaeta.ciphertable import CipherTable

LOG2 = math.log(2.0)


class BudgetExceededError(RuntimeError):
    pass


@dataclass(frozen=True)
class SequencePrior:
    """Plaintext-sequence prior.

    kind "uniform":        every length-n sequence equally likely.
    kind "iid":            independent symbols with the given marginal.
    kind "explicit":       explicit table over length-``n_ref`` sequences;
                           shorter lengths use its prefix marginals.
    """

    kind: str = "uniform"
    marginal: Mapping | None = None
    table: Mapping[tuple, float] | None = None

    _ALIASES = {"iid-with-given-marginal": "iid", "explicit-table": "explicit"}

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", self._ALIASES.get(self.kind, self.kind))
        if self.kind not in ("uniform", "iid", "explicit"):
            raise ValueError(f"unknown prior kind {self.kind!r}")
        if self.kind == "iid":
            if not self.marginal:
                raise ValueError("iid prior needs a marginal")
            _check_dist(self.marginal.values())
        if self.kind == "explicit":
            if not self.table:
                raise ValueError("explicit prior needs a table")
            _check_dist(self.table.values())

    def sequence_prob(self, x_seq: tuple, alphabet: Sequence) -> float:
        n = len(x_seq)
        if self.kind == "uniform":
            return len(alphabet) ** (-n)
        if self.kind == "iid":
            p = 1.0
            for s in x_seq:
                p *= self.marginal.get(s, 0.0)
            return p
        total = 0.0
        for seq, p in self.table.items():
            if len(seq) < n:
                raise ValueError("explicit prior table shorter than requested n")
            if tuple(seq[:n]) == x_seq:
                total += p
        return total


def _check_dist(values) -> None:
    vals = list(values)
    if any(v < 0 for v in vals):
        raise ValueError("probabilities must be nonnegative")
    if not math.isclose(sum(vals), 1.0, rel_tol=0, abs_tol=1e-9):
        raise ValueError("probabilities must sum to 1")


@dataclass
class EntropyProfile:
    n_max: int
    H_K: float
    H_K_given_Y: list[float]
    H_K_given_XY: list[float]
    H_X_given_Y: list[float]
    H_Y_given_X: list[float]
    H_X_given_KY: list[float]      # decryptability diagnostic, ~0 for valid tables
    max_H_K_given_xY: list[float]  # worst plaintext sequence
    min_H_K_given_xY: list[float]  # best plaintext sequence
    zero_tol: float
    n0: int | None = None
    n1: int | None = None
    n1_bar: int | None = None
    n_d: int | None = None

    def finalize_distances(self) -> None:
        def first(pred) -> int | None:
            for i in range(self.n_max):
                if pred(i):
                    return i + 1
            return None

        tol = self.zero_tol
        self.n0 = first(lambda i: self.H_K_given_Y[i] <= tol)
        self.n1 = first(lambda i: self.max_H_K_given_xY[i] <= tol)
        self.n1_bar = first(lambda i: self.min_H_K_given_xY[i] <= tol)
        self.n_d = first(lambda i: abs(self.H_Y_given_X[i] - self.H_K) <= tol)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,H_K_given_Y,H_K_given_XY,H_X_given_Y,H_Y_given_X\n")
        for i in range(self.n_max):
            buf.write(
                f"{i + 1},{self.H_K_given_Y[i]!r},{self.H_K_given_XY[i]!r},"
                f"{self.H_X_given_Y[i]!r},{self.H_Y_given_X[i]!r}\n"
            )
        return buf.getvalue()


@dataclass(frozen=True)
class ShannonCheck:
    ok: bool
    min_slack: float
    worst_n: int


def _entropy(p: np.ndarray) -> float:
    """Shannon entropy in bits of an unnormalized-but-summing-to-s vector."""
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum() / LOG2)


def entropy_profile(
    table: CipherTable,
    prior: SequencePrior,
    key_prior: Mapping | None = None,
    n_max: int = 4,
    *,
    budget: int = 2 ** 26,
    dense_y_budget: int = 2 ** 25,
    key_schedule: Callable[[object, int], object] | None = None,
    keys: Sequence | None = None,
    zero_tol: float = 1e-9,
) -> EntropyProfile:
    """Exact entropy profile for n = 1 .. n_max.

    ``keys`` (defaulting to the table's key alphabet) is the set enumerated;
    with a ``key_schedule`` these are seeds mapped per position onto table
    keys.  ``key_prior`` maps each key to its probability (uniform default).
    """
    if keys is None:
        keys = table.key_alphabet
    keys = list(keys)
    if key_prior is None:
        keyp = np.full(len(keys), 1.0 / len(keys))
    else:
        keyp = np.array([key_prior[k] for k in keys], dtype=float)
        _check_dist(keyp)

    x_alpha = table.plaintext_alphabet
    y_alpha = table.ciphertext_alphabet
    y_index = {y: i for i, y in enumerate(y_alpha)}
    r_max = table.max_list_len()

    joint_states = (len(x_alpha) ** n_max) * len(keys) * (r_max ** n_max)
    if joint_states > budget:
        raise BudgetExceededError(
            f"enumeration needs |X|^n * |K| * r^n = {len(x_alpha)}^{n_max} * "
            f"{len(keys)} * {r_max}^{n_max} = {joint_states} joint states, "
            f"budget is {budget}"
        )
    y_space = len(y_alpha) ** n_max
    if y_space * len(keys) > dense_y_budget:
        raise BudgetExceededError(
            f"dense ciphertext space |Y|^n * |K| = {y_space} * {len(keys)} "
            f"exceeds {dense_y_budget} cells"
        )

    H_K = _entropy(keyp)
    profile = EntropyProfile(
        n_max=n_max, H_K=H_K,
        H_K_given_Y=[], H_K_given_XY=[], H_X_given_Y=[], H_Y_given_X=[],
        H_X_given_KY=[], max_H_K_given_xY=[], min_H_K_given_xY=[],
        zero_tol=zero_tol,
    )

    # Cache per (table-key, position-sym) sparse output vectors as code/prob.
    out_cache: dict = {}

    def outputs(x_sym, k_sym):
        key = (x_sym, k_sym)
        cached = out_cache.get(key)
        if cached is None:
            outs = table.entries[(x_sym, k_sym)]
            codes = np.array([y_index[y] for y, _ in outs], dtype=np.int64)
            probs = np.array([w for _, w in outs], dtype=float)
            cached = (codes, probs)
            out_cache[key] = cached
        return cached

    n_y = len(y_alpha)
    for n in range(1, n_max + 1):
        yn = n_y ** n
        A = np.zeros((yn, len(keys)))       # joint P(y_n, k)
        H_y_given_x = 0.0
        H_k_and_y_given_x = 0.0             # sum_x P(x) H(joint (k,y) | x)
        H_x = 0.0
        max_hx = -math.inf
        min_hx = math.inf
        p_y = np.zeros(yn)

        for x_seq in itertools.product(x_alpha, repeat=n):
            p_x = prior.sequence_prob(x_seq, x_alpha)
            if p_x <= 0:
                continue
            Bx = np.zeros((yn, len(keys)))  # P(y_n | x_seq, k) columns
            for ki, k in enumerate(keys):
                codes = np.zeros(1, dtype=np.int64)
                probs = np.ones(1)
                for i, x_sym in enumerate(x_seq):
                    k_sym = key_schedule(k, i) if key_schedule else k
                    c_i, p_i = outputs(x_sym, k_sym)
                    codes = (codes[:, None] * n_y + c_i[None, :]).reshape(-1)
                    probs = (probs[:, None] * p_i[None, :]).reshape(-1)
                np.add.at(Bx[:, ki], codes, probs)
            joint_x = Bx * keyp[None, :]    # P(y, k | x)
            py_x = joint_x.sum(axis=1)      # P(y | x)
            A += p_x * joint_x
            p_y += p_x * py_x

            h_joint_x = _entropy(joint_x.reshape(-1))
            h_y_x = _entropy(py_x)
            H_y_given_x += p_x * h_y_x
            H_k_and_y_given_x += p_x * h_joint_x
            H_x += -p_x * math.log2(p_x)
            hx = h_joint_x - h_y_x          # H(K | x_seq, Y)
            max_hx = max(max_hx, hx)
            min_hx = min(min_hx, hx)

        H_y = _entropy(p_y)
        H_ky = _entropy(A.reshape(-1))
        H_k_given_y = H_ky - H_y
        H_k_given_xy = H_k_and_y_given_x - H_y_given_x
        # H(X,K,Y) = sum_x P(x) H(K,Y|x) + H(X); subtract H(K,Y) for H(X|KY).
        H_x_given_ky = (H_k_and_y_given_x + H_x) - H_ky
        H_x_given_y = H_y_given_x + H_x - H_y

        profile.H_K_given_Y.append(H_k_given_y)
        profile.H_K_given_XY.append(H_k_given_xy)
        profile.H_X_given_Y.append(H_x_given_y)
        profile.H_Y_given_X.append(H_y_given_x)
        profile.H_X_given_KY.append(max(H_x_given_ky, 0.0))
        profile.max_H_K_given_xY.append(max_hx)
        profile.min_H_K_given_xY.append(min_hx)

    profile.finalize_distances()
    return profile


def shannon_limit_check(profile: EntropyProfile, tol: float = 1e-9) -> ShannonCheck:
    """H(X_n | Y_n) <= H(K) must hold at every n; returns the minimum slack.

    A violation beyond ``tol`` signals an enumeration bug, not a property
    of the cipher -- the inequality is a theorem for standard ciphers.
    """
    slacks = [profile.H_K - h for h in profile.H_X_given_Y]
    worst = int(np.argmin(slacks))
    return ShannonCheck(ok=slacks[worst] >= -tol, min_slack=slacks[worst], worst_n=worst + 1)
