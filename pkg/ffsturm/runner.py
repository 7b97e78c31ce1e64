from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import logging
import time
from typing import Any, Callable, Hashable, List, Optional, Sequence

_logger = logging.getLogger(__name__)

Task = Callable[[Any, Optional[float]], Any]


@dataclass(slots=True)
class TaskResult:
    """Outcome of one batch task.

    Attributes:
        key: The task input as passed to the runner
        status: "ok", "timeout" or "error"
        value: Return value of the task (``None`` unless status is "ok")
        elapsed: Wall time spent inside the task, in seconds
        error: Error message when status is "error"
    """
    key: Hashable
    status: str
    value: Any = None
    elapsed: float = 0.0
    error: str = ""

    @property
    def is_success(self) -> bool:
        return self.status == "ok"


def _call(func: Task, key: Any, timeout: Optional[float]) -> TaskResult:
    start = time.time()
    deadline = start + timeout if timeout is not None else None
    try:
        value = func(key, deadline)
    except TimeoutError:
        return TaskResult(key, "timeout", elapsed=time.time() - start)
    except ValueError as exc:
        return TaskResult(key, "error", elapsed=time.time() - start, error=str(exc))
    return TaskResult(key, "ok", value, time.time() - start)


class BatchRunner:
    """Runs independent tasks, in-process or on a process pool.

    - ``func(key, deadline)`` computes one task; ``deadline`` is a ``time.time()``
      value (or ``None``) that long computations check cooperatively, raising
      ``TimeoutError`` once it passes.
    - ``timeout`` is per task and starts when the task starts.
    - Results come back in input order whatever ``jobs`` is.
    """

    def __init__(self, jobs: int = 1, timeout: Optional[float] = None):
        if jobs < 1:
            raise ValueError("jobs must be at least 1")
        self.jobs = jobs
        self.timeout = timeout

    def run(self, func: Task, keys: Sequence[Any]) -> List[TaskResult]:
        """Execute ``func`` on every key.

        Raises:
            InvariantError: Propagated from a task; self-check failures abort the batch.
        """
        if self.jobs == 1 or len(keys) <= 1:
            results = []
            for key in keys:
                res = _call(func, key, self.timeout)
                self._log(res)
                results.append(res)
            return results
        with ProcessPoolExecutor(max_workers=self.jobs) as pool:
            futures = [pool.submit(_call, func, key, self.timeout) for key in keys]
            results = []
            for fut in futures:
                res = fut.result()
                self._log(res)
                results.append(res)
        return results

    @staticmethod
    def _log(res: TaskResult) -> None:
        if res.status == "ok":
            _logger.info("task %s done in %.2fs", res.key, res.elapsed)
        elif res.status == "timeout":
            _logger.warning("task %s timed out after %.2fs", res.key, res.elapsed)
        else:
            _logger.error("task %s failed: %s", res.key, res.error)
