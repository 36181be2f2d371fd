import json

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def write_config(tmp_path):
    """Writes a configuration dict to a JSON file and returns its path."""
    def _write(raw, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(raw), encoding="utf-8")
        return str(path)
    return _write
