# validators.py
# Schema validation for configuration and data tables, and consistency
# checks on loaded complexes

import json
from collections import Counter
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Optional, Sequence, Tuple

import jsonschema

from .chain_complex import FIRST, SECOND, ChainComplex

if TYPE_CHECKING:
    from .config_manager import MultiplicityTable

BAR_PREFIX = "bar_"


class SchemaValidator:
    """Validator for checking YAML documents against JSON schemas."""

    def __init__(self, schema_dir: str):
        self.schema_dir = Path(schema_dir)
        self.schemas: Dict[str, Dict[str, Any]] = {}

    def _load_schema(self, schema_name: str) -> Optional[Dict[str, Any]]:
        """Parsed schema, cached per name; None when the file is absent."""
        cached = self.schemas.get(schema_name)
        if cached is None:
            path = self.schema_dir / schema_name
            if not path.is_file():
                return None
            cached = self.schemas[schema_name] = json.loads(path.read_text(encoding="utf-8"))
        return cached

    def validate(self, data: Any, schema_name: str) -> Tuple[bool, str]:
        """Validate a parsed document against a schema.

        Args:
            data: Parsed YAML or JSON document
            schema_name: Name of schema file

        Returns:
            Tuple of (is_valid, message)
        """
        schema = self._load_schema(schema_name)
        if schema is None:
            return False, f"Schema '{schema_name}' not found in {self.schema_dir}"

        try:
            jsonschema.validate(instance=data, schema=schema)
        except jsonschema.ValidationError as e:
            location = "/".join(str(part) for part in e.absolute_path) or "<root>"
            return False, f"Schema validation failed at {location}: {e.message}"
        return True, "Document matches schema"


class ConsistencyValidator:
    """Cross-checks between a complex, its class table and its documented counts."""

    def validate_type_pairing(self, x: ChainComplex, by_name: Optional[bool] = None) -> Tuple[bool, str]:
        """Check that first-type d-cells and second-type (d-1)-cells pair up.

        With named cells every first-type N needs a second-type bar_N of the
        same class and multiplicity one degree lower. Positional cell IDs are
        compared by per-class, per-degree counts instead.

        Args:
            x: The complex
            by_name: Force the naming rule on or off (auto-detected when None)

        Returns:
            Tuple of (is_valid, message)
        """
        cells = x.all_cells()
        second = [cell for cell in cells if cell.type_tag == SECOND]
        if by_name is None:
            by_name = bool(second) and all(cell.name.startswith(BAR_PREFIX) for cell in second)

        problems: List[str] = []
        if by_name:
            for cell in cells:
                if cell.type_tag == FIRST:
                    partner_name = BAR_PREFIX + cell.name
                    if partner_name not in x:
                        problems.append(f"{cell.name} has no partner {partner_name}")
                        continue
                    partner = x.cell(partner_name)
                    if (partner.type_tag != SECOND or partner.degree != cell.degree - 1
                            or partner.class_tag != cell.class_tag
                            or partner.multiplicity != cell.multiplicity):
                        problems.append(f"{partner_name} does not match {cell.name}")
                elif cell.name[len(BAR_PREFIX):] not in x:
                    problems.append(f"{cell.name} has no first-type partner")
        else:
            first_counts = Counter((c.class_tag, c.degree - 1) for c in cells if c.type_tag == FIRST)
            second_counts = Counter((c.class_tag, c.degree) for c in second)
            for key in sorted(set(first_counts) | set(second_counts), key=str):
                if first_counts[key] != second_counts[key]:
                    class_tag, degree = key
                    problems.append(
                        f"class {class_tag}: {first_counts[key]} first-type cells in degree {degree + 1}, "
                        f"{second_counts[key]} second-type in degree {degree}"
                    )

        if problems:
            return False, f"Type pairing fails for {x.name}: " + "; ".join(problems[:5])
        return True, f"Type pairing holds for {x.name}"

    def validate_multiplicity_tags(self, x: ChainComplex, table: "MultiplicityTable") -> Tuple[bool, str]:
        """Check that every cell's class is in the table and its mult= tag agrees."""
        problems = []
        for cell in x.all_cells():
            if cell.class_tag not in table.classes:
                problems.append(f"{cell.name}: class {cell.class_tag!r} not in table")
            elif cell.multiplicity is not None and cell.multiplicity != table.classes[cell.class_tag]:
                problems.append(
                    f"{cell.name}: mult={cell.multiplicity} but class {cell.class_tag} has {table.classes[cell.class_tag]}"
                )
        if problems:
            return False, "; ".join(problems[:5])
        return True, f"All {len(x)} cells of {x.name} agree with the multiplicity table"

    def validate_inventory(self, x: ChainComplex, expected_counts: Sequence[int]) -> Tuple[bool, str]:
        """Compare the per-degree cell counts with documented ones."""
        counts = [x.n_cells(d) for d in range(x.max_degree + 1)]
        if counts != list(expected_counts):
            return False, f"{x.name} has cell counts {counts}, expected {list(expected_counts)}"
        return True, f"{x.name} cell counts match {counts}"
