import json
import os
from typing import List

from .exceptions import SchemaError

_SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schemas")


def available_schemas() -> List[str]:
    return sorted(f[: -len(".json")] for f in os.listdir(_SCHEMA_DIR) if f.endswith(".json"))


def get_json_schema(name: str) -> dict:
    """Bundled JSON Schema by name, e.g. ``registry`` or ``experiment``."""
    path = os.path.join(_SCHEMA_DIR, name + ".json")
    if not os.path.isfile(path):
        raise SchemaError(f"No bundled schema '{name}' (have: {', '.join(available_schemas())})")
    with open(path) as f:
        return json.load(f)


if __name__ == "__main__":
    for name in available_schemas():
        print(name, json.dumps(get_json_schema(name), indent=2))
