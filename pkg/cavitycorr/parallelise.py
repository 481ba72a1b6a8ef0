from typing import Any, Callable

from . import api
from .util import cc_logger

if api._PARALLEL:
    from distributed import Client, LocalCluster, wait
else:
    cc_logger.warning("Dask not installed, parallelisation not available")


def chunk(x: list[Any], n_chunks: int) -> list[list[Any]]:
    """Chunks a list into n_chunks contiguous sublists whose lengths differ
    by at most one, longest first

    Args:
         x - list of values of length L
         n_chunks - number of chunks to split into

    Returns:
         a list of n_chunks lists of length L//n_chunks or (L//n_chunks)+1
    """
    size, remainder = divmod(len(x), n_chunks)
    chunks, start = [], 0
    for i in range(n_chunks):
        stop = start + size + (1 if i < remainder else 0)
        chunks.append(x[start:stop])
        start = stop
    return chunks


def distribute(n_proc: int, func: Callable[..., Any], x: list[Any], **kwargs) -> list[Any]:
    """Maps a function over a list on a local dask cluster with n_proc
    worker processes, preserving the input order of the results

    Args:
         n_proc - the number of worker processes
         func - the function to call, with signature func(item, **kwargs)
         x - the list of items
         kwargs - the named arguments accepted by func
    Returns:
         [func(item, **kwargs) for item in x]
    """
    n_proc = max(1, min(n_proc, len(x)))
    results = []
    with LocalCluster(n_workers=n_proc, processes=True) as cluster, Client(cluster) as client:
        for batch in chunk(x, max(1, -(-len(x) // n_proc))):
            if len(batch) == 0:
                continue
            futures = client.map(func, batch, pure=False, **kwargs)
            wait(futures)
            results.extend(f.result() for f in futures)
    return results
