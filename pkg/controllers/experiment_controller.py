"""
Controller coordinating configuration, problem construction, replicas and output.
"""

import logging
import os
import sys
from typing import Callable, Optional, TextIO

import numpy as np

from models.config_store import ConfigStore
from models.data_models import ExperimentConfig, RunReport, VerificationResult
from models.errors import (CertificateError, ConfigError, DimensionMismatch, InvalidProblem, InvalidSchedule,
                           NoConvergence, NonFiniteIterate, NonFiniteValue, NotMonotone, SingularMean,
                           SingularSystem, SppaError, UnsupportedComposite, UnsupportedSet)
from models.problems.instance import CERTIFICATE_TOLERANCE, ProblemInstance
from models.problems.oracles import linear_regularity_witness
from models.problems.registry import ProblemRegistry
from models.replica_manager import ReplicaManager
from views.console_report import print_run_summary, print_verification
from views.csv_export import write_summary, write_trace

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_CERTIFICATE = 4

REGULARITY_SAMPLES = 1000

_EXIT_CODES = [
    (NonFiniteIterate, EXIT_NUMERIC),
    (SingularSystem, EXIT_NUMERIC),
    (CertificateError, EXIT_CERTIFICATE),
    (NoConvergence, EXIT_CERTIFICATE),
    (SingularMean, EXIT_CERTIFICATE),
    ((ConfigError, InvalidSchedule, InvalidProblem, NotMonotone, UnsupportedComposite, UnsupportedSet,
      DimensionMismatch, NonFiniteValue), EXIT_CONFIG),
]


def exit_code_for(exc: BaseException) -> int:
    """Maps a toolkit exception (or OSError) to the CLI exit code."""
    if isinstance(exc, OSError):
        return EXIT_IO
    for types, code in _EXIT_CODES:
        if isinstance(exc, types):
            return code
    return EXIT_CONFIG


class ExperimentController:
    """
    The orchestrator behind the `run` and `verify` subcommands.
    """

    def __init__(self, store: Optional[ConfigStore] = None, out: Optional[TextIO] = None,
                 err: Optional[TextIO] = None):
        self.store = store or ConfigStore()
        self.registry = ProblemRegistry()
        self.out = out or sys.stdout
        self.err = err or sys.stderr

    def load(self, path: str, seed: Optional[int] = None, iterations: Optional[int] = None) -> ExperimentConfig:
        """Loads a config and applies command-line overrides, re-validating the result."""
        config = self.store.load(path)
        if seed is None and iterations is None:
            return config
        raw = config.to_dict()
        if seed is not None:
            raw["master_seed"] = seed
        if iterations is not None:
            raw["iterations"] = iterations
        return ExperimentConfig.from_dict(raw)

    def build(self, config: ExperimentConfig) -> ProblemInstance:
        instance = self.registry.build(config.problem)
        if config.x0 is not None and len(config.x0) != instance.dim:
            raise ConfigError("x0", f"has dimension {len(config.x0)}, problem dimension is {instance.dim}")
        return instance

    def cmd_run(self, config_path: str, out_dir: str, seed: Optional[int] = None,
                iterations: Optional[int] = None) -> int:
        return self._guard(lambda: self._run(config_path, out_dir, seed, iterations))

    def cmd_verify(self, config_path: str) -> int:
        return self._guard(lambda: self._verify(config_path))

    def _run(self, config_path, out_dir, seed, iterations) -> int:
        config = self.load(config_path, seed, iterations)
        instance = self.build(config)
        os.makedirs(out_dir, exist_ok=True)

        def sink(replica: int, report: RunReport):
            write_trace(report.trace, os.path.join(out_dir, config.output.trace_name(replica)))

        reports = ReplicaManager(config.workers).run_all(instance, config, sink)
        summaries = ReplicaManager.summaries(reports)
        write_summary(summaries, os.path.join(out_dir, config.output.summary))
        print_run_summary(summaries, self.out)
        return EXIT_OK

    def _verify(self, config_path) -> int:
        config = self.load(config_path)
        instance = self.build(config)
        result = self.verify_instance(instance, config.master_seed)
        print_verification(result, self.out)
        if result.feasibility_residual is not None and result.feasibility_residual > CERTIFICATE_TOLERANCE:
            raise CertificateError(f"known solution is {result.feasibility_residual:.3e} away from a constraint set")
        return EXIT_OK

    def verify_instance(self, instance: ProblemInstance, seed: int = 0) -> VerificationResult:
        """Re-runs the certificate and, for constrained instances, the feasibility checks."""
        result = VerificationResult(
            kind=instance.kind.value,
            known_solution=instance.known_solution,
            certificate=instance.certificate,
            residual=instance.verify() if instance.known_solution is not None else None,
            modulus=instance.modulus,
        )
        if instance.known_solution is None:
            result.notes.append("no reference solution for this problem")
        if instance.constraint_sets and instance.known_solution is not None:
            x_star = instance.known_solution
            result.feasibility_residual = max(s.distance(x_star) for s in instance.constraint_sets)
            if len(instance.constraint_sets) > 1:
                radius = 2.0 * (1.0 + float(np.linalg.norm(x_star)))
                rng = np.random.default_rng(seed)
                result.regularity_constant = linear_regularity_witness(
                    instance.constraint_sets, radius, REGULARITY_SAMPLES, rng)
        return result

    def _guard(self, action: Callable[[], int]) -> int:
        try:
            return action()
        except (SppaError, OSError) as exc:
            code = exit_code_for(exc)
            logger.debug("command failed", exc_info=True)
            self.err.write(f"error: {type(exc).__name__}: {exc}\n")
            return code
