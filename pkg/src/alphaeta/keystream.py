"""Seed-key expansion: LFSR bit streams, m-bit basis symbols, keystream
expansion, and GF(2) linear forms of keystream bits for attack algebra.

The LFSR is the Fibonacci form written as a pure recurrence: the first
``length`` output bits are the seed itself and every later bit is the XOR
of the tapped earlier bits.  It is deliberately weak; the attack bench
needs its linearity.  Any other expander can be plugged in wherever a
``seed -> bits`` callable is accepted, but only the LFSR ships with
linear-form support.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LfsrConfig:
    """Recurrence ``o[i] = XOR_t o[i - t]`` over tap positions ``t``.

    ``seed`` is the tuple of the first ``length`` output bits, first bit
    emitted first.  The full-degree tap (``length`` itself) must be present
    so the state actually cycles through ``length`` bits.
    """

    length: int
    taps: tuple[int, ...]
    seed: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.length < 1:
            raise ValueError("length must be >= 1")
        taps = tuple(sorted(set(self.taps)))
        object.__setattr__(self, "taps", taps)
        if not taps or any(t < 1 or t > self.length for t in taps):
            raise ValueError("taps must lie in 1..length")
        if self.length not in taps:
            raise ValueError("full-degree tap (position length) required")
        if len(self.seed) != self.length:
            raise ValueError("seed must have exactly `length` bits")
        if any(b not in (0, 1) for b in self.seed):
            raise ValueError("seed bits must be 0 or 1")
        if not any(self.seed):
            raise ValueError("seed must be nonzero")

    @property
    def seed_int(self) -> int:
        """Seed packed into an int, bit i = i-th emitted bit."""
        return sum(b << i for i, b in enumerate(self.seed))

    def with_seed(self, seed_bits: tuple[int, ...] | int) -> "LfsrConfig":
        if isinstance(seed_bits, int):
            seed_bits = tuple((seed_bits >> i) & 1 for i in range(self.length))
        return LfsrConfig(self.length, self.taps, tuple(seed_bits))


def seed_from_hex(hex_string: str, length: int) -> tuple[int, ...]:
    """Seed bits from a hex string, most significant hex digit first."""
    value = int(hex_string, 16)
    if value >> length:
        raise ValueError("hex seed does not fit in the register length")
    return tuple((value >> (length - 1 - i)) & 1 for i in range(length))


def lfsr_stream(config: LfsrConfig, nbits: int) -> np.ndarray:
    """First ``nbits`` output bits; GF(2)-linear in the seed."""
    if nbits < 0:
        raise ValueError("nbits must be >= 0")
    out = np.empty(nbits, dtype=np.uint8)
    n_init = min(nbits, config.length)
    out[:n_init] = config.seed[:n_init]
    for i in range(config.length, nbits):
        bit = 0
        for t in config.taps:
            bit ^= out[i - t]
        out[i] = bit
    return out


def lfsr_period(config: LfsrConfig, limit: int | None = None) -> int:
    """Length of the state cycle containing ``seed`` (cycle detection).

    Practical for ``length`` up to ~20; ``limit`` caps the search.
    """
    if limit is None:
        limit = 2 ** config.length + 1
    state = list(config.seed)
    initial = tuple(state)
    steps = 0
    while steps < limit:
        bit = 0
        for t in config.taps:
            bit ^= state[-t]
        state.append(bit)
        state.pop(0)
        steps += 1
        if tuple(state) == initial:
            return steps
    raise RuntimeError(f"no cycle within {limit} steps")


def chop_symbols(bits: np.ndarray, m: int) -> np.ndarray:
    """Pack consecutive ``m``-bit blocks into integers, first bit most significant.

    A trailing remainder shorter than ``m`` is dropped with a warning.
    """
    if m <= 0:
        raise ValueError("m must be >= 1")
    bits = np.asarray(bits, dtype=np.uint8)
    n_sym = len(bits) // m
    dropped = len(bits) - n_sym * m
    if dropped:
        warnings.warn(
            f"dropping {dropped} trailing bit(s) not filling an m-bit symbol",
            stacklevel=2,
        )
    if n_sym == 0:
        return np.zeros(0, dtype=np.int64)
    blocks = bits[: n_sym * m].reshape(n_sym, m).astype(np.int64)
    weights = 1 << np.arange(m - 1, -1, -1, dtype=np.int64)
    return blocks @ weights


def lfsr_symbols(config: LfsrConfig, n_symbols: int, m: int) -> np.ndarray:
    """First ``n_symbols`` keystream symbols of ``m`` bits each."""
    return chop_symbols(lfsr_stream(config, n_symbols * m), m)


def expand_keystream(symbols: np.ndarray, tables: list, M: int) -> np.ndarray:
    """Apply ``m = log2(M)`` per-symbol functions to every symbol.

    Output order: all functions applied to the first symbol, then all to
    the second, and so on; length is ``m`` times the input length.
    """
    m = M.bit_length() - 1
    if M != 1 << m or M < 2:
        raise ValueError("M must be a power of two >= 2")
    if len(tables) != m:
        raise ValueError(f"expected exactly {m} expansion functions, got {len(tables)}")
    tables_arr = []
    for f in tables:
        arr = np.asarray(f, dtype=np.int64)
        if arr.shape != (M,) or arr.min() < 0 or arr.max() >= M:
            raise ValueError("each expansion function must map [0, M) onto [0, M)")
        tables_arr.append(arr)
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.size == 0:
        return np.zeros(0, dtype=np.int64)
    if symbols.min() < 0 or symbols.max() >= M:
        raise ValueError("keystream symbols out of range for M")
    columns = [arr[symbols] for arr in tables_arr]
    return np.stack(columns, axis=1).reshape(-1)


def keystream_bit_forms(config: LfsrConfig, nbits: int) -> list[int]:
    """GF(2) linear form of each of the first ``nbits`` output bits.

    Form ``i`` is a bitset over seed bits (bit ``b`` = coefficient of the
    b-th emitted seed bit); evaluating it at a seed reproduces
    ``lfsr_stream(seed)[i]``.
    """
    forms: list[int] = []
    for i in range(min(nbits, config.length)):
        forms.append(1 << i)
    for i in range(config.length, nbits):
        f = 0
        for t in config.taps:
            f ^= forms[i - t]
        forms.append(f)
    return forms


def keystream_linear_forms(config: LfsrConfig, symbol_index: int, m: int) -> list[int]:
    """The ``m`` linear forms producing symbol ``Z_i`` (1-based ``symbol_index``).

    Forms are ordered most significant bit first, matching
    :func:`chop_symbols`.
    """
    if symbol_index < 1:
        raise ValueError("symbol_index is 1-based")
    forms = keystream_bit_forms(config, symbol_index * m)
    return forms[(symbol_index - 1) * m : symbol_index * m]


def evaluate_form(form: int, seed_int: int) -> int:
    """Evaluate a GF(2) linear form at a packed seed."""
    return (form & seed_int).bit_count() & 1
