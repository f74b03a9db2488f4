"""Methods relative to worker parallelism."""
from multiprocessing import cpu_count


def get_worker_number(n_jobs: int = None) -> int:
    """Return number of workers to use.

    Parameters
    -------------------
    n_jobs: int = None,
        Requested number of workers.
        None or non-positive values mean one worker per CPU.
    """
    if n_jobs is None or n_jobs <= 0:
        return cpu_count()
    return min(n_jobs, cpu_count())
