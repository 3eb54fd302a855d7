"""Homophonic substitution codec: nonuniform i.i.d. symbols to exactly
uniform fixed-length bit blocks and back.

Each symbol owns a number of l-bit blocks exactly proportional to its
probability, the blocks partition all 2^l values, and the encoder picks
uniformly inside the owned range.  Uniformity of the output is then an
identity, not an asymptotic statement, which is what turns a statistical
attack on the source into a ciphertext-only attack.  Only dyadic priors
(denominator 2^l) are supported; that is what the exact partition needs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np


class NonDyadicPriorError(ValueError):
    def __init__(self, message: str, suggested_block_bits: int | None):
        super().__init__(message)
        self.suggested_block_bits = suggested_block_bits


@dataclass(frozen=True)
class HomophonicCode:
    block_bits: int
    symbols: tuple
    prior: tuple[Fraction, ...]
    offsets: tuple[int, ...]   # first block owned by each symbol
    sizes: tuple[int, ...]     # number of blocks owned

    @property
    def n_blocks(self) -> int:
        return 1 << self.block_bits

    def blocks_of(self, symbol) -> range:
        i = self.symbols.index(symbol)
        return range(self.offsets[i], self.offsets[i] + self.sizes[i])

    def expansion_factor(self) -> float:
        """Output bits per symbol over the source entropy."""
        h = -sum(float(p) * math.log2(float(p)) for p in self.prior if p > 0)
        return self.block_bits / h if h > 0 else math.inf

    def to_json(self) -> str:
        return json.dumps(
            {
                "block_bits": self.block_bits,
                "symbols": list(self.symbols),
                "prior": [[p.numerator, p.denominator] for p in self.prior],
                "offsets": list(self.offsets),
                "sizes": list(self.sizes),
            },
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "HomophonicCode":
        doc = json.loads(text)
        return HomophonicCode(
            block_bits=doc["block_bits"],
            symbols=tuple(doc["symbols"]),
            prior=tuple(Fraction(n, d) for n, d in doc["prior"]),
            offsets=tuple(doc["offsets"]),
            sizes=tuple(doc["sizes"]),
        )


def build_code(prior: Mapping, block_bits: int) -> HomophonicCode:
    """Deterministic lexicographic code for a dyadic prior.

    Blocks 0, 1, 2, ... are handed to the symbols in the prior's order,
    each receiving probability * 2^block_bits of them.  Rejects non-dyadic
    priors, suggesting the smallest workable block length when one exists
    (floats are read exactly, so give Fractions for non-binary ratios).
    """
    if block_bits < 1:
        raise ValueError("block_bits must be >= 1")
    symbols = tuple(prior.keys())
    fractions = []
    for s in symbols:
        p = Fraction(prior[s])
        if p <= 0:
            raise ValueError(f"probability of {s!r} must be > 0")
        fractions.append(p)
    if sum(fractions) != 1:
        raise ValueError("prior must sum to exactly 1")
    scale = 1 << block_bits
    counts = []
    for s, p in zip(symbols, fractions):
        c = p * scale
        if c.denominator != 1:
            denom_lcm = math.lcm(*(f.denominator for f in fractions))
            suggestion = denom_lcm.bit_length() - 1 if denom_lcm & (denom_lcm - 1) == 0 else None
            raise NonDyadicPriorError(
                f"probability of {s!r} is not an integer multiple of 2^-{block_bits}"
                + (f"; smallest valid block length is {suggestion}" if suggestion else
                   "; no block length can represent this prior exactly"),
                suggestion,
            )
        counts.append(int(c))
    offsets = []
    acc = 0
    for c in counts:
        offsets.append(acc)
        acc += c
    assert acc == scale
    return HomophonicCode(
        block_bits=block_bits,
        symbols=symbols,
        prior=tuple(fractions),
        offsets=tuple(offsets),
        sizes=tuple(counts),
    )


def encode(symbols: Sequence, code: HomophonicCode, rng: np.random.Generator) -> np.ndarray:
    """Blocks for a symbol sequence, each drawn uniformly from the symbol's range."""
    index = {s: i for i, s in enumerate(code.symbols)}
    try:
        idx = np.array([index[s] for s in symbols], dtype=np.int64)
    except KeyError as exc:
        raise ValueError(f"symbol {exc.args[0]!r} not in the code") from None
    offsets = np.array(code.offsets, dtype=np.int64)[idx]
    sizes = np.array(code.sizes, dtype=np.int64)[idx]
    if idx.size == 0:
        return np.zeros(0, dtype=np.int64)
    return offsets + rng.integers(0, sizes)


def decode(blocks: Sequence[int], code: HomophonicCode) -> list:
    """Inverts encode exactly; rejects values outside the l-bit range."""
    lookup = np.empty(code.n_blocks, dtype=np.int64)
    for i in range(len(code.symbols)):
        lookup[code.offsets[i] : code.offsets[i] + code.sizes[i]] = i
    blocks = np.asarray(blocks, dtype=np.int64)
    if blocks.size and (blocks.min() < 0 or blocks.max() >= code.n_blocks):
        raise ValueError(f"block outside the {code.block_bits}-bit range")
    return [code.symbols[i] for i in lookup[blocks]]


def verify_uniformity(code: HomophonicCode) -> bool:
    """Exact check that P(block = b) = 2^-l for every block.

    Pure Fraction arithmetic over the code tables; independent of any
    sampling.
    """
    target = Fraction(1, code.n_blocks)
    mass = [Fraction(0)] * code.n_blocks
    for i in range(len(code.symbols)):
        share = code.prior[i] / code.sizes[i]
        for b in range(code.offsets[i], code.offsets[i] + code.sizes[i]):
            mass[b] += share
    return all(m == target for m in mass)


def pack_blocks(blocks: np.ndarray, block_bits: int) -> bytes:
    """Big-endian bit-packing with an 8-byte block-count header."""
    bits = np.zeros(len(blocks) * block_bits, dtype=np.uint8)
    for b in range(block_bits):
        bits[b::block_bits] = (np.asarray(blocks) >> (block_bits - 1 - b)) & 1
    return len(blocks).to_bytes(8, "big") + np.packbits(bits).tobytes()


def unpack_blocks(payload: bytes, block_bits: int) -> np.ndarray:
    n = int.from_bytes(payload[:8], "big")
    bits = np.unpackbits(np.frombuffer(payload[8:], dtype=np.uint8))[: n * block_bits]
    blocks = np.zeros(n, dtype=np.int64)
    for b in range(block_bits):
        blocks = (blocks << 1) | bits[b::block_bits]
    return blocks
