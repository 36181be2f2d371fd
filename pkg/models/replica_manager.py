"""
Model component for running independent SPPA replicas on a worker pool.
"""

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional

import numpy as np

from models.data_models import ExperimentConfig, RunReport, RunSummary
from models.problems.instance import ProblemInstance
from models.random_family import SampleStream
from models.sppa import run

logger = logging.getLogger(__name__)

ReportSink = Callable[[int, RunReport], None]


class ReplicaWorker:
    """
    Runs one replica with its own sample stream.

    The optional sink (the trace writer) is called from the worker thread
    that owns the replica.
    """

    def __init__(self, replica: int, instance: ProblemInstance, config: ExperimentConfig,
                 sink: Optional[ReportSink] = None):
        self.replica = replica
        self.instance = instance
        self.config = config
        self.sink = sink

    def run(self) -> RunReport:
        config = self.config
        x0 = np.array(config.x0) if config.x0 is not None else np.zeros(self.instance.dim)
        stream = SampleStream.for_replica(config.master_seed, self.replica)
        logger.info("replica %d started", self.replica)
        report = run(self.instance.family, config.schedule, x0, config.iterations, stream,
                     diagnostics=config.diagnostics, stride=config.stride,
                     x_star=self.instance.known_solution, objective=self.instance.objective,
                     replica=self.replica)
        if self.instance.gap_fn is not None:
            report.summary.gap = self.instance.gap_fn(report.summary.final_xbar)
        if self.sink is not None:
            self.sink(self.replica, report)
        return report


class ReplicaManager:
    """
    Dispatches replicas to a bounded thread pool and joins their results.

    Each worker owns its stream and output, so the only shared state is the
    immutable problem instance.
    """

    def __init__(self, workers: Optional[int] = None):
        self.workers = workers or os.cpu_count() or 1

    def run_all(self, instance: ProblemInstance, config: ExperimentConfig,
                sink: Optional[ReportSink] = None) -> List[RunReport]:
        """
        Runs every replica of the configuration.

        Returns:
            List[RunReport]: Reports ordered by replica id.

        Raises:
            The first exception raised by any replica; pending replicas are
            cancelled.
        """
        workers = min(self.workers, config.replicas)
        jobs = [ReplicaWorker(r, instance, config, sink) for r in range(config.replicas)]
        logger.info("running %d replicas on %d workers", len(jobs), workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(job.run) for job in jobs]
            try:
                return [f.result() for f in futures]
            except BaseException:
                for f in futures:
                    f.cancel()
                raise

    @staticmethod
    def summaries(reports: List[RunReport]) -> List[RunSummary]:
        return [r.summary for r in reports]
