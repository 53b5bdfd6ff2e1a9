"""Runners which compute the settings of an LO scan.

A scan is split into one work unit per LO setting. The units run in
this process, in a process pool, or in a thread pool when processes are
not available.

Work units are (setting index, callable) pairs. Results are returned in
setting order whatever order the workers finish in, and every unit seeds
its own generator, so the output does not depend on the runner.
"""
import logging
import multiprocessing
import multiprocessing.dummy
import signal
import sys
from abc import ABC
from typing import Any, Callable, Iterable, List, Tuple

runner_logger: logging.Logger = logging.getLogger("dapsim.runner")

WorkUnit = Tuple[int, Callable[[], Any]]


class BaseRunner(ABC):
    """Computes a batch of work units."""

    def run(self, units: Iterable[WorkUnit]) -> List[Any]:
        """Run all work units and return their results ordered by index."""
        raise NotImplementedError

    @classmethod
    def _init_global(cls):
        """Prepare a freshly started worker."""

    @staticmethod
    def _ordered(results: Iterable[Tuple[int, Any]]) -> List[Any]:
        return [res for _, res in sorted(results, key=lambda pair: pair[0])]


class SequentialRunner(BaseRunner):
    """Runs every setting in the calling process."""

    def run(self, units):
        return self._ordered((idx, partial()) for idx, partial in units)


class ParallelRunner(BaseRunner):
    """Spreads the settings of a scan over a pool of workers."""

    POOL_TYPE: Callable
    MAP_FUNCTION_NAME: str

    def __init__(self, processes: int):
        self.processes = processes

    def run(self, units):
        """Run the units on the pool.

        Exceptions raised inside a worker come back as
        :obj:`DelayedException` and are re-raised here with their original
        traceback, for the first failing unit in index order.
        """
        results = []
        with self._create_pool(self.processes, self._init_global) as pool:
            try:
                for idx, result in self._map(pool, self._apply, units):
                    runner_logger.debug("Finished work unit #%d", idx)
                    results.append((idx, result))
            except KeyboardInterrupt:
                runner_logger.warning(
                    "Interrupted after %d of the scan settings.", len(results)
                )
                pool.terminate()
                raise
        ordered = self._ordered(results)
        for result in ordered:
            if isinstance(result, DelayedException):
                result.reraise()
        return ordered

    @staticmethod
    def _apply(unit: WorkUnit):
        """Evaluate one unit inside a worker."""
        idx, partial = unit
        try:
            return idx, partial()
        except Exception as e:
            return idx, DelayedException(e, index=idx)

    @classmethod
    def _create_pool(cls, *args, **kwargs):
        return cls.POOL_TYPE(*args, **kwargs)

    @classmethod
    def _map(cls, pool, *args, **kwargs):
        """Map over the pool, yielding results as workers finish."""
        return getattr(pool, cls.MAP_FUNCTION_NAME)(*args, **kwargs)


class MultiProcessRunner(ParallelRunner):
    """Computes settings in separate processes."""

    POOL_TYPE = multiprocessing.Pool
    MAP_FUNCTION_NAME = "imap_unordered"

    @classmethod
    def _init_global(cls):
        super()._init_global()

        # Ctrl-C is handled by the parent only.
        signal.signal(signal.SIGINT, signal.SIG_IGN)


class MultiThreadRunner(ParallelRunner):
    """Computes settings in threads, for callers without process support."""

    POOL_TYPE = multiprocessing.dummy.Pool
    MAP_FUNCTION_NAME = "imap_unordered"


class DelayedException(Exception):
    """A worker failure carried back to the parent with its traceback."""

    def __init__(self, ee, index=None):
        self.ee = ee
        __, __, self.tb = sys.exc_info()
        self.index = index
        super().__init__(str(ee))

    def __reduce__(self):
        # The traceback pickles through tblib.
        return (_rebuild_delayed, (self.ee, self.tb, self.index))

    def reraise(self):
        """Reraise the encapsulated exception."""
        raise self.ee.with_traceback(self.tb)


def _rebuild_delayed(ee, tb, index) -> DelayedException:
    exc = DelayedException(ee, index=index)
    exc.tb = tb
    return exc


def get_runner(processes: int, allow_process_parallelism: bool = True) -> BaseRunner:
    """The runner for `processes` workers.

    A single worker runs in process. Threads replace processes when
    `allow_process_parallelism` is false.
    """
    if processes > 1:
        if allow_process_parallelism:
            return MultiProcessRunner(processes=processes)
        return MultiThreadRunner(processes=processes)
    return SequentialRunner()
