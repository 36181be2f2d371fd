"""
Persistent storage of experiment configurations.

Configurations are JSON documents with a top-level `schema_version`. This
module reads them into validated ExperimentConfig objects and writes them
back in canonical form.
"""

import json
import logging
import os

from models.data_models import ExperimentConfig
from models.errors import ConfigError

logger = logging.getLogger(__name__)


class ConfigStore:
    """
    Loads and saves experiment configurations.

    I/O failures surface as OSError; malformed JSON and schema violations as
    ConfigError naming the offending field.
    """

    def __init__(self, indent: int = 2):
        self.indent = indent

    def load(self, path: str) -> ExperimentConfig:
        """
        Reads and validates a configuration file.

        Args:
            path: JSON file to read.

        Returns:
            ExperimentConfig: The validated configuration.
        """
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError("<root>", f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        config = ExperimentConfig.from_dict(raw)
        logger.debug("loaded %s (problem kind %s)", path, config.problem.get("kind"))
        return config

    def dumps(self, config: ExperimentConfig) -> str:
        return json.dumps(config.to_dict(), indent=self.indent) + "\n"

    def save(self, config: ExperimentConfig, path: str):
        """Writes the canonical JSON form of a configuration."""
        directory = os.path.dirname(path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(self.dumps(config))

    def round_trip(self, config: ExperimentConfig) -> ExperimentConfig:
        """Serializes and re-parses a configuration."""
        return ExperimentConfig.from_dict(json.loads(self.dumps(config)))
