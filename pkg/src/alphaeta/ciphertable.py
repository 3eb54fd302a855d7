"""Finite random ciphers as explicit tables, with exact randomization analysis.

A :class:`CipherTable` stores, for every (plaintext symbol, key symbol), the
ordered list of ciphertext symbols the randomizer can pick, with a weight per
list entry.  The list position *is* the randomizer value.  For per-symbol
analysis the key symbol plays the role of the keystream symbol z; combined
with a key schedule (see :mod:`alphaeta.entropy`) the same table describes
one symbol of a stream cipher.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Mapping

from alphaeta.signal import mapper_steps

Symbol = Hashable


@dataclass(frozen=True)
class CipherTable:
    plaintext_alphabet: tuple
    key_alphabet: tuple
    ciphertext_alphabet: tuple
    # (x, k) -> tuple of (y, weight); list order is the randomizer value.
    entries: Mapping[tuple, tuple] = field(repr=False)

    def outputs(self, x: Symbol, k: Symbol) -> tuple:
        return self.entries[(x, k)]

    def ys(self, x: Symbol, k: Symbol) -> tuple:
        return tuple(y for y, _ in self.entries[(x, k)])

    def reach(self, x: Symbol, k: Symbol) -> frozenset:
        return frozenset(self.ys(x, k))

    def max_list_len(self, x: Symbol | None = None) -> int:
        pairs = self.entries.items()
        if x is not None:
            pairs = ((key, v) for key, v in pairs if key[0] == x)
        return max(len(v) for _, v in pairs)

    def to_json(self) -> str:
        doc = {
            "plaintext_alphabet": list(self.plaintext_alphabet),
            "key_alphabet": list(self.key_alphabet),
            "ciphertext_alphabet": list(self.ciphertext_alphabet),
            "entries": [
                {
                    "x": x,
                    "k": k,
                    "ys": [y for y, _ in outs],
                    "weights": [w for _, w in outs],
                }
                for (x, k), outs in self.entries.items()
            ],
        }
        return json.dumps(doc, indent=2)

    @staticmethod
    def from_json(text: str) -> "CipherTable":
        doc = json.loads(text)
        entries = {}
        for e in doc["entries"]:
            ys = e["ys"]
            weights = e.get("weights")
            if weights is None:
                weights = [1.0 / len(ys)] * len(ys)
            entries[(e["x"], e["k"])] = tuple(zip(ys, [float(w) for w in weights]))
        return CipherTable(
            plaintext_alphabet=tuple(doc["plaintext_alphabet"]),
            key_alphabet=tuple(doc["key_alphabet"]),
            ciphertext_alphabet=tuple(doc["ciphertext_alphabet"]),
            entries=entries,
        )

    @staticmethod
    def from_lists(plaintexts, keys, ciphertexts, lists) -> "CipherTable":
        """Build from ``lists[(x, k)] = [y0, y1, ...]`` with uniform weights."""
        entries = {}
        for (x, k), ys in lists.items():
            w = 1.0 / len(ys)
            entries[(x, k)] = tuple((y, w) for y in ys)
        return CipherTable(tuple(plaintexts), tuple(keys), tuple(ciphertexts), entries)


@dataclass(frozen=True)
class TableValidation:
    ok: bool
    problems: tuple[str, ...]
    collisions: tuple[tuple, ...]  # (k, x, x', y) with overlapping reach


def validate_table(table: CipherTable) -> TableValidation:
    """Structural checks plus the decryptability invariant.

    Decryptability: under every key, the reachable-ciphertext sets of
    distinct plaintexts are pairwise disjoint, so a receiver that knows the
    key decodes exactly.  Any overlap is reported as a (k, x, x', y) tuple.
    """
    problems: list[str] = []
    y_alpha = set(table.ciphertext_alphabet)
    for x in table.plaintext_alphabet:
        for k in table.key_alphabet:
            if (x, k) not in table.entries:
                problems.append(f"missing entry for (x={x!r}, k={k!r})")
                continue
            outs = table.entries[(x, k)]
            if not outs:
                problems.append(f"empty ciphertext list for (x={x!r}, k={k!r})")
                continue
            total = 0.0
            for y, w in outs:
                if y not in y_alpha:
                    problems.append(f"symbol {y!r} at (x={x!r}, k={k!r}) not in ciphertext alphabet")
                if w <= 0:
                    problems.append(f"non-positive weight at (x={x!r}, k={k!r}, y={y!r})")
                total += w
            if not math.isclose(total, 1.0, rel_tol=0, abs_tol=1e-9):
                problems.append(f"weights at (x={x!r}, k={k!r}) sum to {total}, not 1")
    collisions: list[tuple] = []
    if not problems:
        xs = table.plaintext_alphabet
        for k in table.key_alphabet:
            for i, x in enumerate(xs):
                reach_x = table.reach(x, k)
                for x2 in xs[i + 1 :]:
                    shared = reach_x & table.reach(x2, k)
                    for y in sorted(shared, key=repr):
                        collisions.append((k, x, x2, y))
    ok = not problems and not collisions
    return TableValidation(ok=ok, problems=tuple(problems), collisions=tuple(collisions))


def gamma_lambda_exact(table: CipherTable) -> tuple[int, int]:
    """Exact per-symbol randomization parameters (Gamma, Lambda).

    Gamma: over every (plaintext x, ciphertext y reachable from x,
    randomizer value r), the count of keys that can reach y from x minus
    the count of keys that emit y from x at exactly position r; Gamma is
    the minimum, i.e. the guaranteed number of *extra* keys consistent
    with a known-plaintext observation beyond the fixed-randomizer ones.

    Lambda: minimum over (x, k) of the number of distinct reachable
    ciphertexts minus one -- the guaranteed per-symbol ciphertext
    randomization.  Both are 0 exactly when every list is a singleton.
    """
    gamma = None
    lam = None
    for x in table.plaintext_alphabet:
        max_r = table.max_list_len(x)
        # keys reaching y from x, and keys emitting y at fixed position r
        reach_keys: dict = {}
        fixed_keys: dict = {}
        for k in table.key_alphabet:
            ys = table.ys(x, k)
            lam_term = len(set(ys)) - 1
            lam = lam_term if lam is None else min(lam, lam_term)
            for y in set(ys):
                reach_keys.setdefault(y, set()).add(k)
            for r, y in enumerate(ys):
                fixed_keys.setdefault((y, r), set()).add(k)
        for y, keys in reach_keys.items():
            for r in range(max_r):
                term = len(keys) - len(fixed_keys.get((y, r), ()))
                gamma = term if gamma is None else min(gamma, term)
    assert gamma is not None and lam is not None
    return gamma, lam


def xor_table(key_bits: int = 1) -> CipherTable:
    """Nonrandom reference cipher: y = x XOR k on 1-bit symbols.

    ``key_bits`` > 1 appends inert key bits (redundant key use) for
    degeneracy experiments.
    """
    keys = list(range(1 << key_bits))
    lists = {}
    for x in (0, 1):
        for k in keys:
            lists[(x, k)] = [x ^ (k & 1)]
    return CipherTable.from_lists((0, 1), tuple(keys), (0, 1), lists)


def identity_table(n_keys: int = 4) -> CipherTable:
    """Fully degenerate cipher: y = x under every key."""
    keys = tuple(range(n_keys))
    lists = {(x, k): [x] for x in (0, 1) for k in keys}
    return CipherTable.from_lists((0, 1), keys, (0, 1), lists)


def example_random_cipher() -> CipherTable:
    """The five-key, five-symbol random cipher used as the worked example.

    Binary plaintext, keys k0..k4, ciphertext letters a..e; each (x, k)
    lists two or three letters and every (plaintext, ciphertext) pair is
    connected by at least two keys.  Its exact parameters are Gamma=1,
    Lambda=1.
    """
    lists = {
        ("0", "k0"): ["a", "b"],
        ("1", "k0"): ["c", "d", "e"],
        ("0", "k1"): ["c", "d"],
        ("1", "k1"): ["e", "a", "b"],
        ("0", "k2"): ["e", "a"],
        ("1", "k2"): ["b", "c", "d"],
        ("0", "k3"): ["b", "c"],
        ("1", "k3"): ["d", "e", "a"],
        ("0", "k4"): ["d", "e"],
        ("1", "k4"): ["a", "b", "c"],
    }
    return CipherTable.from_lists(
        ("0", "1"), ("k0", "k1", "k2", "k3", "k4"), ("a", "b", "c", "d", "e"), lists
    )


def alpha_eta_wedge_table(M: int, window: int) -> CipherTable:
    """Toy alpha-eta symbol channel under hard-support wedge noise.

    Plaintext bit x and basis z map to the wedge of the transmitted state;
    the observed wedge is uniform over the ``2*window + 1`` wedges within
    ``window`` steps of it, and wedges further out are unreachable.  The
    hard support is what makes exact unicity analysis possible.
    Decryptable whenever ``window < M // 2``.
    """
    if window < 0 or window >= M // 2:
        raise ValueError("window must satisfy 0 <= window < M/2")
    two_m = 2 * M
    lists = {}
    for x in (0, 1):
        for z in range(M):
            s = mapper_steps(x, z, M)
            lists[(x, z)] = [(s + off) % two_m for off in range(-window, window + 1)]
    return CipherTable.from_lists((0, 1), tuple(range(M)), tuple(range(two_m)), lists)


def load_example_table() -> CipherTable:
    """Bundled copy of :func:`example_random_cipher` (data/example_cipher.json)."""
    path = Path(__file__).parent / "data" / "example_cipher.json"
    return CipherTable.from_json(path.read_text())
