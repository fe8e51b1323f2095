"""Worker-pool and atomic-update plumbing.

Shared parent/hook arrays are plain Python lists: under the GIL single reads
and single stores are atomic, and list indexing is the fastest interpreted
access path. Compare-and-swap is a read-modify-write, so in threaded runs it
goes through a striped lock table; the single-worker deterministic mode uses
the same kernels with ``cas=None`` (plain check-then-write).
"""

from __future__ import annotations

import threading
from typing import Callable, Optional

Cas = Optional[Callable[[int, int, int], bool]]

_N_STRIPES = 64  # power of two


def make_striped_cas(arr: list, stripes: list[threading.Lock] | None = None):
    """A compare-and-swap closure over ``arr`` guarded by striped locks.
    Returns (cas, stripes) so several arrays can share one lock table."""
    if stripes is None:
        stripes = [threading.Lock() for _ in range(_N_STRIPES)]
    mask = len(stripes) - 1

    def cas(i: int, old: int, new: int) -> bool:
        lock = stripes[i & mask]
        lock.acquire()
        ok = arr[i] == old
        if ok:
            arr[i] = new
        lock.release()
        return ok

    return cas, stripes


def run_workers(workers: int, body: Callable[[int], None]) -> None:
    """Run ``body(worker_id)`` on ``workers`` threads (inline when 1).
    Exceptions raised by any worker propagate to the caller."""
    if workers <= 1:
        body(0)
        return
    errors: list[BaseException] = []

    def wrapped(wid: int) -> None:
        try:
            body(wid)
        except BaseException as exc:  # propagated after join
            errors.append(exc)

    threads = [
        threading.Thread(target=wrapped, args=(wid,), daemon=True)
        for wid in range(1, workers)
    ]
    for t in threads:
        t.start()
    wrapped(0)
    for t in threads:
        t.join()
    if errors:
        raise errors[0]


def chunk_bounds(total: int, workers: int, wid: int) -> tuple[int, int]:
    """Contiguous [lo, hi) slice of ``total`` items for worker ``wid``."""
    base, extra = divmod(total, workers)
    lo = wid * base + min(wid, extra)
    return lo, lo + base + (1 if wid < extra else 0)
