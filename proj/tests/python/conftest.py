import json
import os
import pathlib
import sys

import jsonschema
import pytest
from referencing import Registry, Resource

ROOT = pathlib.Path(__file__).resolve().parents[2]
SCHEMA_DIR = ROOT / "schemas"

# Prefer an installed package; fall back to the build tree.
try:
    import bdar  # noqa: F401
except ImportError:
    sys.path.insert(0, str(ROOT / "build" / "python"))


def _registry():
    resources = []
    for path in SCHEMA_DIR.glob("*.schema.json"):
        resources.append((path.name, Resource.from_contents(json.loads(path.read_text()))))
    return Registry().with_resources(resources)


@pytest.fixture(scope="session")
def validate():
    """validate(kind, instance) checks an object against schemas/<kind>.schema.json."""
    registry = _registry()

    def check(kind, instance):
        schema = json.loads((SCHEMA_DIR / f"{kind}.schema.json").read_text())
        jsonschema.Draft7Validator(schema, registry=registry).validate(instance)

    return check


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("BDAR_CLI", str(ROOT / "build" / "tools" / "bdar"))
    if not pathlib.Path(path).exists():
        pytest.skip("CLI binary not found; set BDAR_CLI or build the tools target")
    return path
