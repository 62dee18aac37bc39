"""Configuration loader for experiment and problem files (YAML or JSON)."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from pydantic import ValidationError

from ..exceptions import ConfigurationError
from ..problems import ConvexProblem, ProblemCatalog, problem_from_dict
from ..utils.logger import get_logger
from .schema import ExperimentConfig, ProblemSpec


logger = get_logger(__name__)


def _validation_context(error: ValidationError) -> Dict[str, Any]:
    fields = [".".join(str(p) for p in err["loc"]) or "<root>" for err in error.errors()]
    messages = [err["msg"] for err in error.errors()]
    return {"fields": ", ".join(fields), "errors": "; ".join(messages)}


class ConfigLoader:
    """Load and validate experiment configurations and problem files.

    A relative ``problem`` path inside an experiment file is resolved against
    the experiment file's directory first, then against base_dir. A bare name
    with no file behind it is looked up in the problem catalog.
    """

    def __init__(self, base_dir: Optional[Path] = None, catalog: Optional[ProblemCatalog] = None):
        """Initialize the config loader.

        Args:
            base_dir: Base directory for resolving relative paths (defaults to project root)
            catalog: Problem catalog for named problems (loaded lazily when omitted)
        """
        if base_dir is None:
            # Default to project root (3 levels up from this file)
            base_dir = Path(__file__).parent.parent.parent
        self.base_dir = Path(base_dir)
        self._catalog = catalog

    @property
    def catalog(self) -> ProblemCatalog:
        if self._catalog is None:
            self._catalog = ProblemCatalog()
        return self._catalog

    def _resolve(self, path: Union[str, Path], relative_to: Optional[Path] = None) -> Optional[Path]:
        candidate = Path(path)
        if candidate.is_absolute():
            return candidate if candidate.exists() else None
        for root in filter(None, (relative_to, Path.cwd(), self.base_dir)):
            if (root / candidate).exists():
                return root / candidate
        return None

    def _read(self, path: Path) -> Dict[str, Any]:
        with open(path, 'r') as f:
            text = f.read()
        try:
            data = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ConfigurationError("Could not parse config file",
                                     context={"path": str(path), "error": str(e)}) from e
        if not isinstance(data, dict):
            raise ConfigurationError("Config file must hold a mapping", context={"path": str(path)})
        return data

    def load_experiment(self, config_path: Union[str, Path]) -> ExperimentConfig:
        """Load an experiment configuration.

        Raises:
            ConfigurationError: missing file, unparsable content or invalid fields
        """
        config_file = self._resolve(config_path)
        if config_file is None:
            raise ConfigurationError("Configuration file not found", context={"path": str(config_path)})
        raw = self._read(config_file)
        problem = raw.get("problem")
        if isinstance(problem, str):
            resolved = self._resolve(problem, relative_to=config_file.parent)
            if resolved is not None:
                raw["problem"] = str(resolved)
        config = self.validate_experiment(raw)
        logger.debug(f"Loaded experiment config {config_file}", extra={"algorithm": config.algorithm})
        return config

    def validate_experiment(self, raw: Dict[str, Any]) -> ExperimentConfig:
        try:
            return ExperimentConfig(**raw)
        except ValidationError as e:
            raise ConfigurationError("Invalid experiment config", context=_validation_context(e)) from e

    def load_problem_spec(self, path: Union[str, Path]) -> ProblemSpec:
        """Load and validate a problem JSON or YAML file."""
        problem_file = self._resolve(path)
        if problem_file is None:
            raise ConfigurationError("Problem file not found", context={"path": str(path)})
        try:
            return ProblemSpec(**self._read(problem_file))
        except ValidationError as e:
            raise ConfigurationError("Invalid problem spec",
                                     context={"path": str(problem_file), **_validation_context(e)}) from e

    def load_problem(self, problem: Union[ProblemSpec, str, Path]) -> ConvexProblem:
        """Build a problem from an inline spec, a file path or a catalog name."""
        if isinstance(problem, ProblemSpec):
            return problem_from_dict(problem.to_dict())
        problem_file = self._resolve(problem)
        if problem_file is not None:
            spec = self.load_problem_spec(problem_file)
            return problem_from_dict(spec.to_dict(), name=problem_file.stem)
        if str(problem) in self.catalog:
            return self.catalog.get(str(problem))
        raise ConfigurationError(
            "Problem is neither a file nor a catalog name",
            context={"problem": str(problem), "catalog": ", ".join(self.catalog.list_problems())}
        )


def load_experiment(config_path: Union[str, Path], base_dir: Optional[Path] = None) -> ExperimentConfig:
    """Convenience function to load an experiment configuration.

    Args:
        config_path: Path to configuration file
        base_dir: Base directory for resolving paths (defaults to project root)

    Returns:
        Validated ExperimentConfig object
    """
    loader = ConfigLoader(base_dir=base_dir)
    return loader.load_experiment(config_path)


def load_problem(problem: Union[ProblemSpec, str, Path], base_dir: Optional[Path] = None) -> ConvexProblem:
    """Convenience function to build a problem from a spec, a file or a catalog name."""
    return ConfigLoader(base_dir=base_dir).load_problem(problem)
