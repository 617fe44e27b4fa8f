import json
import logging
import os
from typing import Any, Dict, Iterator, List, Optional, Sequence

from jsonschema import Draft7Validator

from sicspin_core.exceptions import ParameterError, SchemaError
from sicspin_core.schema import get_json_schema
from sicspin_spin.zfs import ZfsParams

from .rates import PhotoPhysics
from .species import DefectSpecies, Thresholds

logger = logging.getLogger(__name__)


def _registries_dir() -> str:
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), "registries")


DEFAULT_REGISTRY_PATH = os.path.join(_registries_dir(), "default.json")


class DefectRegistry:
    """Ordered collection of defect species with unique names."""

    def __init__(self, species: Sequence[DefectSpecies]) -> None:
        self._species: List[DefectSpecies] = list(species)
        seen = set()
        for i, s in enumerate(self._species):
            if s.name in seen:
                raise SchemaError(f"Duplicate species name {s.name!r}", row=i, column="name")
            seen.add(s.name)

    def __iter__(self) -> Iterator[DefectSpecies]:
        return iter(self._species)

    def __len__(self) -> int:
        return len(self._species)

    def __contains__(self, name: object) -> bool:
        return any(s.name == name for s in self._species)

    def __getitem__(self, name: str) -> DefectSpecies:
        for s in self._species:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def names(self) -> List[str]:
        return [s.name for s in self._species]

    def without(self, *names: str) -> "DefectRegistry":
        return DefectRegistry([s for s in self._species if s.name not in names])

    def replace(self, species: DefectSpecies) -> "DefectRegistry":
        if species.name not in self:
            raise KeyError(species.name)
        return DefectRegistry([species if s.name == species.name else s for s in self._species])

    def provenance(self) -> Dict[str, dict]:
        """Per-species provenance flags, carried into every emitted report."""
        return {s.name: s.provenance_dict() for s in self._species}

    def to_json_list(self) -> List[Dict[str, Any]]:
        return [species_to_json_dict(s) for s in self._species]


def species_to_json_dict(species: DefectSpecies) -> Dict[str, Any]:
    return {
        "name": species.name,
        "d_mhz": species.zfs.d_mhz,
        "e_mhz": species.zfs.e_mhz,
        "orientation_class": species.orientation_class.value,
        "weight": species.weight,
        "sign": species.sign,
        "transitions": [t.value for t in species.transitions],
        "rabi_scale": species.rabi_scale,
        "thresholds_ev": {
            "zpl": species.thresholds.zpl_ev,
            "ionization": species.thresholds.ion_threshold_ev,
            "recovery": species.thresholds.recovery_threshold_ev,
        },
        "rates": species.photophysics.to_json_dict(),
        "provenance": species.provenance,
        "assumed_fields": list(species.assumed_fields),
    }


def species_from_json_dict(entry: Dict[str, Any]) -> DefectSpecies:
    thresholds = entry["thresholds_ev"]
    kwargs: Dict[str, Any] = {
        key: entry[key] for key in ("weight", "sign", "rabi_scale", "provenance") if key in entry
    }
    if "transitions" in entry:
        kwargs["transitions"] = tuple(entry["transitions"])
    if "assumed_fields" in entry:
        kwargs["assumed_fields"] = tuple(entry["assumed_fields"])
    return DefectSpecies(
        name=entry["name"],
        zfs=ZfsParams(entry["d_mhz"], entry["e_mhz"]),
        orientation_class=entry["orientation_class"],
        thresholds=Thresholds(
            zpl_ev=thresholds["zpl"],
            ion_threshold_ev=thresholds["ionization"],
            recovery_threshold_ev=thresholds["recovery"],
        ),
        photophysics=PhotoPhysics(**entry.get("rates", {})),
        **kwargs,
    )


def parse_registry(data: Any, source: str = "<registry>") -> DefectRegistry:
    """Validates a decoded registry document; unknown keys are errors."""
    validator = Draft7Validator(get_json_schema("registry"))
    errors = sorted(validator.iter_errors(data), key=lambda e: [str(p) for p in e.path])
    if errors:
        first = errors[0]
        path = list(first.path)
        row = path[0] if path and isinstance(path[0], int) else None
        column = ".".join(str(p) for p in path[1:]) or None
        raise SchemaError(f"Invalid registry {source}: {first.message}", row=row, column=column)

    species = []
    for i, entry in enumerate(data):
        try:
            species.append(species_from_json_dict(entry))
        except ParameterError as e:
            raise SchemaError(f"Invalid registry {source}: {e}", row=i) from e
    logger.debug(f"Loaded {len(species)} species from {source}")
    return DefectRegistry(species)


def load_registry(path: Optional[str] = None) -> DefectRegistry:
    """Loads the registry at ``path``, or the bundled default one."""
    path = path or DEFAULT_REGISTRY_PATH
    if not os.path.isfile(path):
        raise SchemaError(f"Registry file not found: {path}")
    with open(path) as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise SchemaError(f"Registry {path} is not valid JSON: {e}") from e
    return parse_registry(data, path)


def default_registry() -> DefectRegistry:
    return load_registry(DEFAULT_REGISTRY_PATH)
