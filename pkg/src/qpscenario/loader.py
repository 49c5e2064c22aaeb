"""
loader.py

Reading scenario files.

YAML is the native format; files ending in `.json` are read as JSON.
Syntax errors carry the 1-based line number, schema errors list every
offending key path.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import yaml
from pydantic import ValidationError

from src.qpcore import ConfigError, ScenarioParseError

from .models import Scenario
from .validator import ScenarioValidator

logger = logging.getLogger(__name__)


def _format_validation_error(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = '.'.join(str(part) for part in err['loc']) or '<root>'
        lines.append(f"  - {loc}: {err['msg']}")
    return "Invalid scenario:\n" + "\n".join(lines)


class ScenarioLoader:
    """Loads and parses scenario files"""

    @staticmethod
    def parse_text(content: str, fmt: str = 'yaml') -> Dict[str, Any]:
        """
        Raw mapping from scenario text

        Raises:
            ScenarioParseError: Malformed text or a top level that is not a mapping
        """
        if fmt == 'json':
            try:
                data = json.loads(content)
            except json.JSONDecodeError as exc:
                raise ScenarioParseError(exc.msg, exc.lineno) from exc
        elif fmt == 'yaml':
            try:
                data = yaml.safe_load(content)
            except yaml.YAMLError as exc:
                mark = getattr(exc, 'problem_mark', None)
                line = mark.line + 1 if mark is not None else None
                problem = getattr(exc, 'problem', None) or str(exc)
                raise ScenarioParseError(problem, line) from exc
        else:
            raise ConfigError(f"Unknown scenario format '{fmt}'")
        if not isinstance(data, dict):
            raise ScenarioParseError(f"Scenario must be a mapping, got {type(data).__name__}", 1)
        return data

    @staticmethod
    def load_from_string(content: str, fmt: str = 'yaml') -> Scenario:
        """
        Scenario from text

        Raises:
            ScenarioParseError: Malformed text
            ConfigError: Missing sections, unknown keys or bad values
        """
        data = ScenarioLoader.parse_text(content, fmt)
        try:
            return Scenario.model_validate(data)
        except ValidationError as exc:
            raise ConfigError(_format_validation_error(exc)) from exc

    @staticmethod
    def load_from_file(path: Union[str, Path]) -> Scenario:
        """
        Scenario from a file (JSON by suffix, YAML otherwise)

        Raises:
            ConfigError: Unreadable file
            ScenarioParseError: Malformed text
        """
        path = Path(path)
        try:
            content = path.read_text(encoding='utf-8')
        except OSError as exc:
            raise ConfigError(f"Cannot read scenario {path}: {exc}") from exc
        fmt = 'json' if path.suffix.lower() == '.json' else 'yaml'
        scenario = ScenarioLoader.load_from_string(content, fmt)
        logger.info("Loaded scenario '%s' from %s", scenario.name, path)
        return scenario


def load_scenario(path: Union[str, Path]) -> Scenario:
    """Parse and validate a scenario file"""
    scenario = ScenarioLoader.load_from_file(path)
    ScenarioValidator.validate_and_raise(scenario)
    return scenario
