import numpy as np
import pytest

from alphaeta.ciphertable import (
    CipherTable,
    alpha_eta_wedge_table,
    example_random_cipher,
    gamma_lambda_exact,
    identity_table,
    load_example_table,
    validate_table,
    xor_table,
)
from alphaeta.entropy import SequencePrior, entropy_profile


def test_example_table_valid():
    assert validate_table(example_random_cipher()).ok


def test_xor_table_valid():
    assert validate_table(xor_table()).ok


def test_collision_detected():
    t = CipherTable.from_lists((0, 1), ("k0",), ("a",), {(0, "k0"): ["a"], (1, "k0"): ["a"]})
    report = validate_table(t)
    assert not report.ok
    assert ("k0", 0, 1, "a") in report.collisions


def test_missing_entry_is_a_problem():
    t = CipherTable((0, 1), ("k0",), ("a", "b"), {(0, "k0"): (("a", 1.0),)})
    report = validate_table(t)
    assert not report.ok
    assert any("missing entry" in p for p in report.problems)


def test_bad_weights_flagged():
    t = CipherTable((0,), ("k0",), ("a", "b"), {(0, "k0"): (("a", 0.7), ("b", 0.7))})
    assert not validate_table(t).ok


def test_example_gamma_lambda():
    assert gamma_lambda_exact(example_random_cipher()) == (1, 1)


def test_xor_gamma_lambda_zero():
    assert gamma_lambda_exact(xor_table()) == (0, 0)


def test_identity_gamma_lambda_zero():
    assert gamma_lambda_exact(identity_table()) == (0, 0)


def test_three_key_construction_gamma_two():
    # Six keys on Z6, ciphertext (residue mod 3, bit): every (x, y) cell is
    # reached by four keys, every fixed randomizer position by two, and each
    # list holds two distinct symbols: Gamma = 2, Lambda = 1.
    keys = tuple(range(6))
    ys = tuple((v, b) for v in range(3) for b in (0, 1))
    lists = {}
    for x in (0, 1):
        for k in keys:
            lists[(x, k)] = [((k % 3), x), (((k + 1) % 3), x)]
    t = CipherTable.from_lists((0, 1), keys, ys, lists)
    assert validate_table(t).ok
    gamma, lam = gamma_lambda_exact(t)
    assert gamma == 2
    assert lam == 1


def test_singleton_lists_mean_no_randomization():
    rng = np.random.default_rng(0)
    for _ in range(10):
        # random permutation ciphers: singleton lists, decryptable
        n = int(rng.integers(2, 5))
        keys = tuple(range(int(rng.integers(1, 4))))
        lists = {}
        for k in keys:
            perm = rng.permutation(n)
            for x in range(n):
                lists[(x, k)] = [int(perm[x])]
        t = CipherTable.from_lists(tuple(range(n)), keys, tuple(range(n)), lists)
        assert gamma_lambda_exact(t) == (0, 0)


def test_lambda_and_profile_invariant_under_list_reorder():
    base = example_random_cipher()
    rng = np.random.default_rng(3)
    shuffled = {}
    for key, outs in base.entries.items():
        order = rng.permutation(len(outs))
        shuffled[key] = tuple(outs[i] for i in order)
    t2 = CipherTable(base.plaintext_alphabet, base.key_alphabet,
                     base.ciphertext_alphabet, shuffled)
    assert gamma_lambda_exact(t2)[1] == gamma_lambda_exact(base)[1]
    p1 = entropy_profile(base, SequencePrior("uniform"), n_max=2)
    p2 = entropy_profile(t2, SequencePrior("uniform"), n_max=2)
    assert np.allclose(p1.H_K_given_Y, p2.H_K_given_Y)
    assert np.allclose(p1.H_K_given_XY, p2.H_K_given_XY)
    assert np.allclose(p1.H_Y_given_X, p2.H_Y_given_X)


def test_gamma_invariant_under_common_position_relabel():
    # Renaming the randomizer values (one permutation per plaintext, applied
    # to every key's list) permutes the fixed-r terms without changing the
    # minimum.
    base = example_random_cipher()
    perms = {"0": [1, 0], "1": [2, 0, 1]}
    relabeled = {}
    for (x, k), outs in base.entries.items():
        perm = perms[x]
        relabeled[(x, k)] = tuple(outs[perm[r]] for r in range(len(outs)))
    t2 = CipherTable(base.plaintext_alphabet, base.key_alphabet,
                     base.ciphertext_alphabet, relabeled)
    assert gamma_lambda_exact(t2)[0] == gamma_lambda_exact(base)[0]


def test_gamma_can_change_under_independent_reorder():
    # Independent per-(x, k) permutations can align two keys' lists so that
    # a fixed randomizer position explains both, collapsing the per-position
    # key count; only Lambda and the entropy profile are reorder-invariant.
    base = example_random_cipher()
    entries = dict(base.entries)
    entries[("0", "k2")] = tuple(reversed(entries[("0", "k2")]))  # e,a -> a,e
    t2 = CipherTable(base.plaintext_alphabet, base.key_alphabet,
                     base.ciphertext_alphabet, entries)
    assert gamma_lambda_exact(base)[0] == 1
    assert gamma_lambda_exact(t2)[0] == 0


def test_json_roundtrip(tmp_path):
    t = example_random_cipher()
    text = t.to_json()
    t2 = CipherTable.from_json(text)
    assert t2.plaintext_alphabet == t.plaintext_alphabet
    assert t2.entries == t.entries
    assert gamma_lambda_exact(t2) == (1, 1)


def test_bundled_example_file():
    t = load_example_table()
    assert validate_table(t).ok
    assert gamma_lambda_exact(t) == (1, 1)


def test_wedge_table_shape_and_parameters():
    t = alpha_eta_wedge_table(4, 1)
    assert validate_table(t).ok
    assert gamma_lambda_exact(t) == (0, 2)
    assert len(t.ciphertext_alphabet) == 8
    with pytest.raises(ValueError):
        alpha_eta_wedge_table(4, 2)  # window >= M/2 breaks decryptability
