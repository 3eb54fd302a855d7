from alphaeta.rng import substream, substream_entropy


def test_same_labels_same_stream():
    a = substream(42, "simulate", 3).integers(0, 1 << 30, 8)
    b = substream(42, "simulate", 3).integers(0, 1 << 30, 8)
    assert (a == b).all()


def test_labels_separate_streams():
    a = substream(42, "simulate", 3).integers(0, 1 << 30, 8)
    b = substream(42, "simulate", 4).integers(0, 1 << 30, 8)
    c = substream(42, "kpa", 3).integers(0, 1 << 30, 8)
    assert not (a == b).all()
    assert not (a == c).all()


def test_label_boundaries_distinct():
    # ("kpa", 3) and ("kpa3",) must not collide
    assert substream_entropy(1, "kpa", 3) != substream_entropy(1, "kpa3")


def test_master_seed_changes_stream():
    a = substream(1, "x").integers(0, 1 << 30, 8)
    b = substream(2, "x").integers(0, 1 << 30, 8)
    assert not (a == b).all()
