# config_manager.py
# Configuration loading for the verification engine: system settings,
# builtin dataset registry and multiplicity class tables

from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .errors import ClassificationError, ConfigError, DatasetLookupError
from .validators import SchemaValidator

PACKAGE_DIR = Path(__file__).parent
CONFIG_DIR = PACKAGE_DIR / "config"
SCHEMA_DIR = PACKAGE_DIR / "schemas"


class MultiplicityTable:
    """Class tag -> multiplicity -> filtration level, for one complex."""

    def __init__(self, complex_name: str, classes: Dict[str, int], levels: Dict[int, int]):
        """Initialize the table.

        Args:
            complex_name: Complex the table belongs to (e.g. "CD3")
            classes: Multiplicity of every cell class
            levels: Filtration level of every multiplicity value
        """
        self.complex_name = complex_name
        self.classes = dict(classes)
        self.levels = {int(m): int(p) for m, p in levels.items()}

    def multiplicity(self, class_tag: Optional[str]) -> int:
        if class_tag is None or class_tag not in self.classes:
            raise ClassificationError(
                f"class {class_tag!r} is not in the {self.complex_name} multiplicity table"
            )
        return self.classes[class_tag]

    def level(self, class_tag: Optional[str]) -> int:
        mult = self.multiplicity(class_tag)
        if mult not in self.levels:
            raise ClassificationError(
                f"multiplicity {mult} of class {class_tag!r} has no {self.complex_name} filtration level"
            )
        return self.levels[mult]


class ConfigManager:
    """Loads and validates the YAML configuration shipped with the package."""

    def __init__(self, config_path: Optional[str] = None):
        """Initialize the configuration manager.

        Args:
            config_path: Path to a system.yml replacing the packaged one
        """
        self.config_path = Path(config_path) if config_path else CONFIG_DIR / "system.yml"
        self.schema_validator = SchemaValidator(str(SCHEMA_DIR))
        self.config = self.load_yaml(self.config_path, "system_schema.json")
        self._multiplicity: Optional[Dict[str, Any]] = None

    def load_yaml(self, path: Path, schema_name: Optional[str] = None) -> Any:
        """Load a YAML document and check it against a schema.

        Args:
            path: YAML file to read
            schema_name: Schema file in the schemas directory, or None to skip

        Returns:
            The parsed document
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"Configuration file not found: {path}")

        try:
            with open(path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except (yaml.YAMLError, UnicodeDecodeError) as e:
            raise ConfigError(f"Could not parse {path}: {e}") from e

        if schema_name:
            is_valid, message = self.schema_validator.validate(data, schema_name)
            if not is_valid:
                raise ConfigError(f"{path.name}: {message}")
        return data

    def get(self, section: str, key: Optional[str] = None, default: Any = None) -> Any:
        """Get a configuration section, or one key of it.

        Args:
            section: Top-level section name
            key: Key inside the section
            default: Value returned when the section or key is missing

        Returns:
            The configured value or the default
        """
        if not self.config:
            raise ConfigError("Configuration not loaded. Check system.yml.")
        value = self.config.get(section)
        if value is None:
            return default
        if key is None:
            return value
        return value.get(key, default)

    @property
    def data_dir(self) -> Path:
        data_dir = Path(self.get("data", "data_dir", "data"))
        return data_dir if data_dir.is_absolute() else PACKAGE_DIR / data_dir

    @property
    def separator(self) -> str:
        return self.get("reports", "separator", "\t")

    def dataset_entry(self, complex_name: str) -> Dict[str, Any]:
        datasets = self.get("datasets", default={})
        if complex_name not in datasets:
            known = ", ".join(sorted(datasets))
            raise DatasetLookupError(f"unknown complex {complex_name!r} (known: {known})")
        return datasets[complex_name]

    def dataset_path(self, complex_name: str, section: str, name: str) -> Path:
        """Resolve a registered data file.

        Args:
            complex_name: Complex name, e.g. "CD3"
            section: "encodings", "chains" or "tables"
            name: Entry inside the section, e.g. "matrices"

        Returns:
            Absolute path of the file
        """
        entries = self.dataset_entry(complex_name).get(section, {})
        if name not in entries:
            known = ", ".join(sorted(entries)) or "none"
            raise DatasetLookupError(
                f"{complex_name} has no {section[:-1]} {name!r} (available: {known})"
            )
        return self.data_dir / entries[name]

    def load_table(self, complex_name: str, name: str) -> Any:
        """Load a YAML data table registered under `tables`, validated by its schema."""
        return self.load_yaml(self.dataset_path(complex_name, "tables", name), f"{name}_schema.json")

    def multiplicity_table(self, complex_name: str) -> MultiplicityTable:
        if self._multiplicity is None:
            self._multiplicity = self.load_yaml(CONFIG_DIR / "multiplicity.yml", "multiplicity_schema.json")
        if complex_name not in self._multiplicity:
            raise ClassificationError(f"no multiplicity table for complex {complex_name!r}")
        entry = self._multiplicity[complex_name]
        return MultiplicityTable(complex_name, entry["classes"], entry["levels"])


_default_manager: Optional[ConfigManager] = None


def get_config(config_path: Optional[str] = None) -> ConfigManager:
    """Return the shared configuration manager, loading it on first use.

    Passing a path replaces the shared manager with one built from that file.
    """
    global _default_manager
    if config_path is not None or _default_manager is None:
        _default_manager = ConfigManager(config_path)
    return _default_manager
