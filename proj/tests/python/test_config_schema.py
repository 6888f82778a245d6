import json
from pathlib import Path

import pytest

jsonschema = pytest.importorskip("jsonschema")

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def load(name):
    return json.loads((CONFIGS / name).read_text())


@pytest.fixture(scope="module")
def validator():
    schema = load("config.schema.json")
    jsonschema.Draft202012Validator.check_schema(schema)
    return jsonschema.Draft202012Validator(schema)


@pytest.mark.parametrize("name", ["fixtures.json", "full_protocol.json"])
def test_shipped_configs_validate(validator, name):
    validator.validate(load(name))


def test_schema_rejects_unknown_keys(validator):
    doc = load("fixtures.json")
    doc["repetiton"] = 3
    assert not validator.is_valid(doc)
    doc = load("fixtures.json")
    doc["algorithms"] = [{"id": "pso", "pso": {"inertia": {"kind": "cubic"}}}]
    assert not validator.is_valid(doc)


def test_dataset_needs_exactly_one_source(validator):
    doc = load("fixtures.json")
    doc["datasets"] = [{"name": "x", "registry": "iris", "csv": {"path": "a.csv"}}]
    assert not validator.is_valid(doc)
