import asyncio
import logging
import os
import time

from squid_lindblad.config import RunConfig
from squid_lindblad.observables import SweepRecord, evaluate_point


def default_workers() -> int:
    return max(os.cpu_count() or 1, 1)


class AsyncSweepRunner:
    """Runs the damping x cutoff x flux grid of a RunConfig.

    Every grid point is a blocking dense linear-algebra job and goes to a
    worker thread; at most ``workers`` of them run at once. Records come back
    in grid order (damping rate major, flux minor) regardless of completion
    order.
    """

    def __init__(
        self, config: RunConfig, log: logging.Logger = None, workers: int = None
    ) -> None:
        self.config = config
        self.log = log or logging.getLogger(__name__)

        if workers is None:
            workers = config.workers
        self.workers: int = workers if workers and workers > 0 else default_workers()

        self.started: float = None
        self.finished: float = None
        self.done: int = 0

    @property
    def grid(self) -> list[tuple[float, float, float]]:
        """(gamma_ratio, cutoff_ratio, flux_fraction) triples."""
        return [
            (gamma, cutoff, float(phi))
            for gamma in self.config.gamma_ratios
            for cutoff in self.config.cutoff_ratios
            for phi in self.config.flux_grid
        ]

    @property
    def elapsed(self) -> float:
        if self.started is None:
            return 0.0
        return (self.finished or time.monotonic()) - self.started

    async def _point(
        self,
        semaphore: asyncio.Semaphore,
        gamma: float,
        cutoff: float,
        flux_fraction: float,
    ) -> SweepRecord:
        scales = self.config.scales_at(cutoff, gamma)
        async with semaphore:
            record = await asyncio.to_thread(
                evaluate_point, flux_fraction, scales, self.config.sim
            )
        self.done += 1
        self.log.debug(
            "point %d/%d done: gamma %.4g, xi %.4g, flux %.4f",
            self.done,
            len(self.grid),
            gamma,
            scales.xi,
            flux_fraction,
        )
        return record

    async def run(self) -> list[SweepRecord]:
        grid = self.grid
        self.log.info(
            "sweeping %d points (%d damping rates, %d cutoffs) on %d workers",
            len(grid),
            len(self.config.gamma_ratios),
            len(self.config.cutoff_ratios),
            self.workers,
        )
        self.started = time.monotonic()
        self.done = 0

        semaphore = asyncio.Semaphore(self.workers)
        records = await asyncio.gather(
            *(self._point(semaphore, *point) for point in grid)
        )

        self.finished = time.monotonic()
        failed = sum(r.error is not None for r in records)
        if failed:
            self.log.warning("%d of %d points failed", failed, len(records))
        self.log.info("sweep finished in %.1f s", self.elapsed)
        return list(records)


def flux_sweep(config: RunConfig, workers: int = None) -> list[SweepRecord]:
    """Blocking entry point for callers without an event loop."""
    return asyncio.run(AsyncSweepRunner(config, workers=workers).run())
