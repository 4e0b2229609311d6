"""Scenario assembly, theorem verification, file I/O and the ``randlen`` CLI."""

from .config import ConfigError, ExperimentConfig, from_dict, load_config
from .io import export_paths, import_paths, write_json
from .scenario import ScenarioResult, run_scenario
from .verify import THEOREMS, HypothesisError, VerificationReport, gate, verify_theorem

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "HypothesisError",
    "ScenarioResult",
    "THEOREMS",
    "VerificationReport",
    "export_paths",
    "from_dict",
    "gate",
    "import_paths",
    "load_config",
    "run_scenario",
    "verify_theorem",
    "write_json",
]
