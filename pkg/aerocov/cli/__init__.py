"""Command-line entry point: ``aerocov <command> --config experiment.json``."""
from ._commands import COMMANDS, RunContext
from ._config import (
    ConfigError,
    ExperimentConfig,
    LocalCurveBlock,
    OptimizeBlock,
    OverallBlock,
    TableBlock,
    ThresholdSpec,
    ValidateBlock,
)
from ._main import (
    EXIT_COMPUTE,
    EXIT_CONFIG,
    EXIT_INFEASIBLE,
    EXIT_OK,
    EXIT_VALIDATION,
    main,
)

__all__ = [
    "COMMANDS",
    "ConfigError",
    "EXIT_COMPUTE",
    "EXIT_CONFIG",
    "EXIT_INFEASIBLE",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "ExperimentConfig",
    "LocalCurveBlock",
    "OptimizeBlock",
    "OverallBlock",
    "RunContext",
    "TableBlock",
    "ThresholdSpec",
    "ValidateBlock",
    "main",
]
