import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from alphaeta.signal import (
    AlphaEtaParams,
    apply_channel,
    encrypt_sequence,
    mapper_angle,
    mapper_steps,
    records_to_csv,
    transmittance_from_loss,
)


def test_mapper_basis_zero():
    assert mapper_angle(0, 0, 4) == 0.0
    assert mapper_angle(1, 0, 4) == math.pi


def test_mapper_odd_basis_hand_values():
    # Pol(1) = 1 swaps the bit assignment on odd bases.
    assert math.isclose(mapper_angle(0, 1, 4), 5 * math.pi / 4)
    assert math.isclose(mapper_angle(1, 1, 4), math.pi / 4)


def test_mapper_rejects_out_of_range():
    with pytest.raises(ValueError):
        mapper_steps(0, 4, 4)
    with pytest.raises(ValueError):
        mapper_steps(2, 0, 4)


@settings(max_examples=100, deadline=None)
@given(M=st.sampled_from([2, 4, 8, 16, 64, 256]), z=st.data())
def test_mapper_antipodal_and_injective(M, z):
    zv = z.draw(st.integers(0, M - 1))
    s0 = mapper_steps(0, zv, M)
    s1 = mapper_steps(1, zv, M)
    assert (s1 - s0) % (2 * M) == M
    # injective over all (x, z)
    points = {mapper_steps(x, zz, M) for x in (0, 1) for zz in range(M)}
    assert len(points) == 2 * M


@pytest.mark.parametrize("M", [4, 8, 16])
def test_interleaving_alternates_except_half_circle_seams(M):
    # Walking the circle, neighbouring points carry opposite bits except at
    # the two half-circle seams, where antipodality forces equal bits; strict
    # global alternation is impossible for even M.
    bits = {}
    for x in (0, 1):
        for z in range(M):
            bits[mapper_steps(x, z, M)] = x
    seam_pairs = {(M - 1, M), (2 * M - 1, 0)}
    for j in range(2 * M):
        nxt = (j + 1) % (2 * M)
        if (j, nxt) in seam_pairs:
            assert bits[j] == bits[nxt]
        else:
            assert bits[j] != bits[nxt]


def test_uniform_cover():
    M = 8
    counts = np.zeros(2 * M, dtype=int)
    for x in (0, 1):
        for z in range(M):
            counts[mapper_steps(x, z, M)] += 1
    assert (counts == 1).all()


def test_encrypt_sequence_records():
    params = AlphaEtaParams(S=9.0, M=4)
    recs = encrypt_sequence([0, 1], [1, 1], params)
    assert [r.theta_steps for r in recs] == [5, 1]
    assert math.isclose(recs[0].theta, 5 * math.pi / 4)
    assert all(r.energy == 9.0 for r in recs)


def test_encrypt_sequence_custom_mapper():
    # any (x, z, M) -> steps assignment can be plugged in
    def flipped(x, z, M):
        return mapper_steps(1 - np.asarray(x), z, M)

    params = AlphaEtaParams(S=1.0, M=4)
    recs = encrypt_sequence([0, 1], [0, 0], params, mapper=flipped)
    assert [r.theta_steps for r in recs] == [4, 0]


def test_encrypt_sequence_empty_and_mismatch():
    params = AlphaEtaParams(S=1.0, M=4)
    assert encrypt_sequence([], [], params) == []
    with pytest.raises(ValueError):
        encrypt_sequence([0, 1], [0], params)


def test_apply_channel():
    params = AlphaEtaParams(S=10.0, M=4)
    rec = encrypt_sequence([0], [0], params)[0]
    assert apply_channel(rec, 1.0).energy == 10.0
    out = apply_channel(rec, 0.5)
    assert out.energy == 5.0
    assert out.theta_steps == rec.theta_steps
    with pytest.raises(ValueError):
        apply_channel(rec, 0.0)
    with pytest.raises(ValueError):
        apply_channel(rec, 1.5)


def test_fiber_loss_energy_scale():
    # 0.2 dB/km over 80 km leaves roughly a thousand photons of 4e4.
    eta = transmittance_from_loss(0.2, 80.0)
    assert 900 < eta * 4e4 < 1100


def test_params_validation():
    with pytest.raises(ValueError):
        AlphaEtaParams(S=0.0, M=4)
    with pytest.raises(ValueError):
        AlphaEtaParams(S=1.0, M=3)
    with pytest.raises(ValueError):
        AlphaEtaParams(S=1.0, M=4, eta=0.0)
    assert AlphaEtaParams(S=1.0, M=8).m == 3


def test_records_csv():
    params = AlphaEtaParams(S=2.0, M=4)
    text = records_to_csv(encrypt_sequence([0, 1], [0, 3], params))
    lines = text.strip().split("\n")
    assert lines[0] == "i,x,z,theta_steps,energy"
    assert lines[1] == "0,0,0,0,2.0"
    assert lines[2].startswith("1,1,3,3,")
