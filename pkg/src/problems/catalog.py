"""
Problem Catalog

Loads named test instances from a YAML file so that experiments can refer to
a problem by name (e.g. ``quadratic``, ``random_qp_small``) instead of a path.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml

from ..exceptions import ConfigurationError
from .builders import problem_from_dict
from .model import ConvexProblem


DEFAULT_CATALOG = Path(__file__).resolve().parent.parent.parent / "configs" / "problem_catalog.yaml"


@dataclass
class CatalogEntry:
    """One named instance of the catalog."""

    name: str
    description: str
    spec: Dict[str, Any] = field(repr=False)
    tags: List[str] = field(default_factory=list)

    def build(self) -> ConvexProblem:
        """Construct the problem described by this entry."""
        return problem_from_dict(self.spec, name=self.name)


class ProblemCatalog:
    """Manages loading and accessing named problem instances."""

    def __init__(self, catalog_file: Optional[Path] = None):
        """
        Initialize the catalog.

        Args:
            catalog_file: Path to the YAML catalog (defaults to configs/problem_catalog.yaml)
        """
        self.catalog_file = Path(catalog_file) if catalog_file else DEFAULT_CATALOG
        self.entries: Dict[str, CatalogEntry] = {}
        self._load_entries()

    def _load_entries(self):
        if not self.catalog_file.exists():
            raise ConfigurationError(
                "Problem catalog not found", context={"path": str(self.catalog_file)}
            )

        with open(self.catalog_file, 'r') as f:
            data = yaml.safe_load(f) or {}

        for name, entry in data.get("problems", {}).items():
            if "spec" not in entry:
                raise ConfigurationError("Catalog entry lacks 'spec'", context={"entry": name})
            self.entries[name] = CatalogEntry(
                name=name,
                description=entry.get("description", ""),
                spec=entry["spec"],
                tags=list(entry.get("tags", [])),
            )

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def get(self, name: str) -> ConvexProblem:
        """
        Build the named problem.

        Raises:
            ConfigurationError: unknown name
        """
        if name not in self.entries:
            raise ConfigurationError(
                "Unknown catalog problem",
                context={"name": name, "available": sorted(self.entries)}
            )
        return self.entries[name].build()

    def list_problems(self, tag: Optional[str] = None) -> List[str]:
        """List entry names, optionally restricted to a tag."""
        return [n for n, e in self.entries.items() if tag is None or tag in e.tags]
