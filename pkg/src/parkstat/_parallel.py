import os
from concurrent.futures import ProcessPoolExecutor


def default_workers() -> int:
    return os.cpu_count() or 1


def fan_out(fn, jobs, workers=1):
    """Map ``fn`` over ``jobs`` and return results in job order.

    Worker processes are used when ``workers > 1``; callers merge the
    results with exact arithmetic, so the outcome never depends on scheduling.
    """
    jobs = list(jobs)
    if workers is None:
        workers = default_workers()
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, jobs))
