import numpy as np
import pytest

from aerocov.util import (
    THREADS_ENV,
    iter_chunks,
    labelled_grid,
    parallel_map,
    resolve_threads,
    trial_rng,
)


def test_resolve_threads(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_threads() == 1
    assert resolve_threads(3) == 3
    monkeypatch.setenv(THREADS_ENV, "4")
    assert resolve_threads() == 4
    monkeypatch.setenv(THREADS_ENV, "many")
    with pytest.raises(ValueError, match=THREADS_ENV):
        resolve_threads()
    with pytest.raises(ValueError):
        resolve_threads(0)


def test_iter_chunks():
    assert list(iter_chunks(5, 2)) == [(0, 2), (2, 4), (4, 5)]
    assert list(iter_chunks(3, 10)) == [(0, 3)]
    assert list(iter_chunks(0, 10)) == []


def test_trial_rng_is_per_trial():
    a = trial_rng(42, 7).random(3)
    np.testing.assert_array_equal(a, trial_rng(42, 7).random(3))
    assert not np.array_equal(a, trial_rng(42, 8).random(3))
    assert not np.array_equal(a, trial_rng(43, 7).random(3))


def _square(x):
    return x * x


@pytest.mark.parametrize("threads", [1, 2])
def test_parallel_map_keeps_order(threads):
    assert parallel_map(_square, range(6), threads) == [0, 1, 4, 9, 16, 25]


def test_labelled_grid():
    grid = labelled_grid({"beta_1": [1e-3, 1e-2], "beta_2": [1e-3]}, attrs={"a": 1})
    assert grid.dims == ("beta_1", "beta_2")
    assert grid.shape == (2, 1)
    assert np.isnan(grid.values).all()
    assert grid.attrs == {"a": 1}
    with pytest.raises(ValueError):
        labelled_grid({})
    with pytest.raises(ValueError):
        labelled_grid({"beta_1": []})
