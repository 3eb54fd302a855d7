"""Simulator and cryptanalysis bench for the alpha-eta coherent-state stream cipher.

The alpha-eta scheme encrypts one data bit per optical mode as one of 2M
coherent-state phases on a circle; a keystream picks the basis and the
receiver's quantum noise acts as an irremovable randomizer for anyone
without the key.  This package provides:

* exact information-theoretic analysis of small finite random ciphers
  (:mod:`alphaeta.ciphertable`, :mod:`alphaeta.entropy`),
* LFSR keystream generation and its GF(2) linear algebra
  (:mod:`alphaeta.keystream`, :mod:`alphaeta.gf2`),
* the phase mapper and channel model (:mod:`alphaeta.signal`),
* heterodyne / canonical-phase measurement simulation
  (:mod:`alphaeta.measurement`, :mod:`alphaeta.fock`),
* an attack bench: Helstrom discrimination of the bit mixtures, wedge
  candidate extraction, empirical randomization parameters, assisted
  brute-force seed recovery, and the half-circle reduction analysis
  (:mod:`alphaeta.attacks`),
* closed-form security estimates (:mod:`alphaeta.bounds`),
* a homophonic substitution codec (:mod:`alphaeta.homophonic`),
* a reproducible experiment CLI (:mod:`alphaeta.cli`).
"""

from alphaeta.signal import AlphaEtaParams, QumodeRecord, mapper_angle, mapper_steps

__version__ = "0.1.0"

__all__ = [
    "AlphaEtaParams",
    "QumodeRecord",
    "mapper_angle",
    "mapper_steps",
    "__version__",
]
