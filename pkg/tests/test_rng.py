import numpy as np

from jetmorse.rng import stream


def test_same_path_same_stream():
    a = stream(1, "x", 2).standard_normal(8)
    b = stream(1, "x", 2).standard_normal(8)
    assert np.array_equal(a, b)


def test_distinct_paths_decorrelated():
    a = stream(1, "x", 2).standard_normal(8)
    b = stream(1, "x", 3).standard_normal(8)
    c = stream(2, "x", 2).standard_normal(8)
    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_tuple_path_components():
    a = stream(5, "fiber", (1, 2), (1, 1)).standard_normal(4)
    b = stream(5, "fiber", (1, 2), (1, 1)).standard_normal(4)
    assert np.array_equal(a, b)
