"""Cooperative task queue with bounded concurrency."""

import asyncio
import time


class Job:
    __slots__ = ("name", "coro_factory", "attempts", "max_attempts")

    def __init__(self, name, coro_factory, max_attempts=3):
        self.name = name
        self.coro_factory = coro_factory
        self.attempts = 0
        self.max_attempts = max_attempts

    def exhausted(self):
        return self.attempts >= self.max_attempts


class WorkerPool:
    """Runs jobs with at most ``size`` concurrent workers."""

    def __init__(self, size=4, retry_delay=0.5):
        self.size = size
        self.retry_delay = retry_delay
        self._queue = asyncio.Queue()
        self._results = {}
        self._failures = {}

    async def submit(self, job):
        await self._queue.put(job)

    async def _run_one(self, job):
        job.attempts += 1
        started = time.monotonic()
        try:
            result = await job.coro_factory()
        except Exception as exc:  # noqa: BLE001 - collected, not swallowed
            if job.exhausted():
                self._failures[job.name] = exc
            else:
                await asyncio.sleep(self.retry_delay)
                await self._queue.put(job)
            return
        self._results[job.name] = (result, time.monotonic() - started)

    async def _worker(self):
        while True:
            job = await self._queue.get()
            try:
                await self._run_one(job)
            finally:
                self._queue.task_done()

    async def drain(self):
        """Process every queued job, then stop the workers."""
        workers = [asyncio.create_task(self._worker()) for _ in range(self.size)]
        await self._queue.join()
        for worker in workers:
            worker.cancel()
        return dict(self._results), dict(self._failures)


def run_jobs(jobs, size=4):
    async def main():
        pool = WorkerPool(size=size)
        for job in jobs:
            await pool.submit(job)
        return await pool.drain()

    return asyncio.run(main())
