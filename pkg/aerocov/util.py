from __future__ import annotations

import logging
import os
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Iterator,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
)

import numpy as np
from dask.array.core import normalize_chunks

try:
    from tqdm import tqdm
except ImportError:

    def tqdm(a, **kwargs):  # type: ignore
        return a


if TYPE_CHECKING:
    import xarray as xr
    from numpy.typing import ArrayLike

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "AEROCOV_THREADS"

logger = logging.getLogger(__name__)


def dbm_to_watts(p_dbm: ArrayLike) -> Any:
    return 10 ** ((np.asarray(p_dbm, dtype=float) - 30) / 10)


def db_to_linear(x_db: ArrayLike) -> Any:
    return 10 ** (np.asarray(x_db, dtype=float) / 10)


def linear_to_db(x: ArrayLike) -> Any:
    with np.errstate(divide="ignore"):
        return 10 * np.log10(np.asarray(x, dtype=float))


def resolve_threads(threads: Optional[int] = None) -> int:
    """Worker count: explicit value, then ``AEROCOV_THREADS``, then 1."""
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        if not env:
            return 1
        try:
            threads = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    if threads < 1:
        raise ValueError(f"thread count must be at least 1, got {threads}")
    return threads


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Private generator of one Monte-Carlo trial.

    Trial ``t`` of root seed ``s`` always draws from
    ``SeedSequence(s, spawn_key=(t,))``, independent of how trials are
    chunked or scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def iter_chunks(total: int, chunk_size: int) -> Iterator[Tuple[int, int]]:
    """Iterate ``(start, stop)`` windows covering ``range(total)``.

    Examples
    --------
    >>> list(iter_chunks(5, 2))
    [(0, 2), (2, 4), (4, 5)]
    """
    if total <= 0:
        return
    (chunks,) = normalize_chunks((chunk_size,), (total,))
    start = 0
    for size in chunks:
        yield start, start + size
        start += size


def parallel_map(
    func: Callable[[T], R],
    items: Sequence[T],
    threads: Optional[int] = None,
    desc: Optional[str] = None,
) -> List[R]:
    """Apply ``func`` to every item, preserving order.

    With more than one worker the calls are scheduled as ``dask.delayed``
    tasks on the multiprocessing scheduler, so ``func`` and the items must be
    picklable and ``func`` must not rely on process-global state.
    """
    n_workers = resolve_threads(threads)
    items = list(items)
    if n_workers == 1 or len(items) <= 1:
        return [func(x) for x in tqdm(items, desc=desc, disable=None, leave=False)]

    import dask

    logger.debug("dispatching %d tasks to %d workers", len(items), n_workers)
    tasks = [dask.delayed(func)(x) for x in items]
    return list(dask.compute(*tasks, scheduler="processes", num_workers=n_workers))


def labelled_grid(
    coords: Mapping[str, ArrayLike],
    fill: float = np.nan,
    dtype: Any = float,
    attrs: Optional[Mapping[str, Any]] = None,
) -> xr.DataArray:
    """Create an empty DataArray over the product of named coordinate axes."""
    import xarray as xr

    if not coords:
        raise ValueError("Must provide at least one coordinate axis")
    axes = {k: np.asarray(v) for k, v in coords.items()}
    for name, values in axes.items():
        if values.ndim != 1 or not values.size:
            raise ValueError(f"axis {name!r} must be a non-empty 1D sequence")
    shape = tuple(v.size for v in axes.values())
    return xr.DataArray(
        np.full(shape, fill, dtype=dtype),
        coords=list(axes.items()),
        attrs=dict(attrs or {}),
    )
