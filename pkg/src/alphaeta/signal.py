"""Alpha-eta encryption proper: the phase mapper, sequence encryption and
channel attenuation.

Phases are kept as exact integer multiples of pi/M (``theta_steps``) until a
measurement needs radians, so wedge arithmetic never suffers float drift.
"""

from __future__ import annotations

import dataclasses
import io
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AlphaEtaParams:
    """Transmitter and line parameters.

    S    -- mean photon number at the transmitter (|alpha|^2)
    M    -- number of bases (power of two); the circle carries 2M states
    eta  -- line transmittance in (0, 1]
    """

    S: float
    M: int
    eta: float = 1.0

    def __post_init__(self) -> None:
        if not self.S > 0:
            raise ValueError("S must be > 0")
        if self.M < 2 or (self.M & (self.M - 1)) != 0:
            raise ValueError("M must be a power of two >= 2")
        if not (0.0 < self.eta <= 1.0):
            raise ValueError("eta must be in (0, 1]")

    @property
    def m(self) -> int:
        """Keystream bits per symbol, log2(M)."""
        return self.M.bit_length() - 1

    @property
    def received_energy(self) -> float:
        return self.eta * self.S


def mapper_steps(x, z, M: int):
    """Phase of state (x, z) in units of pi/M, as an integer in [0, 2M).

    The two states of basis z are antipodal (M steps apart) and the bit
    carried by the in-circle point alternates with the parity of z, which
    interleaves the bit assignments of neighbouring bases.
    Accepts scalars or numpy arrays.
    """
    x_arr = np.asarray(x)
    z_arr = np.asarray(z)
    if np.any((z_arr < 0) | (z_arr >= M)):
        raise ValueError("keystream symbol out of range [0, M)")
    if np.any((x_arr < 0) | (x_arr > 1)):
        raise ValueError("data bit must be 0 or 1")
    steps = (z_arr + M * (x_arr ^ (z_arr & 1))) % (2 * M)
    if np.isscalar(x) and np.isscalar(z):
        return int(steps)
    return steps


def mapper_angle(x, z, M: int):
    """Mapper phase in radians, in [0, 2*pi)."""
    steps = mapper_steps(x, z, M)
    return steps * (math.pi / M)


@dataclass(frozen=True)
class QumodeRecord:
    """Ground truth for one transmitted mode.

    ``theta_steps`` is the phase in units of pi/M on the 2M-point circle;
    ``M`` travels with the record so the radian phase is self-contained.
    """

    index: int
    x: int
    z: int
    theta_steps: int
    energy: float
    M: int

    @property
    def theta(self) -> float:
        return self.theta_steps * (math.pi / self.M)


def encrypt_sequence(x_bits, keystream, params: AlphaEtaParams,
                     mapper=mapper_steps) -> list[QumodeRecord]:
    """Encrypt a bit sequence against a keystream symbol sequence.

    Synchronous stream-cipher structure: record i depends only on
    (x_i, z_i).  Energy is the transmitter energy S; apply_channel models
    the line.  ``mapper`` is any (x, z, M) -> steps assignment; only the
    standard interleaved one ships.
    """
    x_arr = np.asarray(x_bits, dtype=np.int64)
    z_arr = np.asarray(keystream, dtype=np.int64)
    if x_arr.shape != z_arr.shape:
        raise ValueError("data bits and keystream must have equal length")
    if x_arr.size == 0:
        return []
    steps = mapper(x_arr, z_arr, params.M)
    return [
        QumodeRecord(index=i, x=int(x_arr[i]), z=int(z_arr[i]),
                     theta_steps=int(steps[i]), energy=params.S, M=params.M)
        for i in range(x_arr.size)
    ]


def encrypt_steps(x_bits, keystream, M: int, mapper=mapper_steps) -> np.ndarray:
    """Vectorized mapper over sequences (steps only, no record objects)."""
    return mapper(np.asarray(x_bits, dtype=np.int64),
                  np.asarray(keystream, dtype=np.int64), M)


def apply_channel(record: QumodeRecord, eta: float) -> QumodeRecord:
    """Attenuate a record: phase unchanged, energy scaled by eta."""
    if not (0.0 < eta <= 1.0):
        raise ValueError("eta must be in (0, 1]")
    return dataclasses.replace(record, energy=record.energy * eta)


def transmittance_from_loss(db_per_km: float, distance_km: float) -> float:
    """Line transmittance for a fiber loss figure."""
    return 10.0 ** (-db_per_km * distance_km / 10.0)


def records_to_csv(records: list[QumodeRecord]) -> str:
    """Ground-truth CSV: i,x,z,theta_steps,energy."""
    buf = io.StringIO()
    buf.write("i,x,z,theta_steps,energy\n")
    for r in records:
        buf.write(f"{r.index},{r.x},{r.z},{r.theta_steps},{r.energy!r}\n")
    return buf.getvalue()
