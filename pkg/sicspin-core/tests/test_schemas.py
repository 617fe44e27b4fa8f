import unittest

from jsonschema import validate as _validate
from jsonschema.exceptions import ValidationError

from sicspin_charge.registry import default_registry
from sicspin_core import schema
from sicspin_core.exceptions import SchemaError

registry_schema = schema.get_json_schema("registry")
experiment_schema = schema.get_json_schema("experiment")

valid_species = {
    "name": "PLtest",
    "d_mhz": 1300.0,
    "e_mhz": 20.0,
    "orientation_class": "basal",
    "thresholds_ev": {"zpl": 1.1, "ionization": 0.9, "recovery": 1.3},
    "provenance": "assumed",
}


class RegistrySchemaTest(unittest.TestCase):
    def setUp(self):
        self.schema = registry_schema

    def validate(self, obj):
        _validate(obj, self.schema)

    def test_default_registry(self):
        self.validate(default_registry().to_json_list())

    def test_minimal_species(self):
        self.validate([valid_species])

    def test_empty(self):
        with self.assertRaises(ValidationError):
            self.validate([])

    def test_unknown_key(self):
        with self.assertRaises(ValidationError):
            self.validate([{**valid_species, "colour": "red"}])

    def test_orientation_class(self):
        with self.assertRaises(ValidationError):
            self.validate([{**valid_species, "orientation_class": "diagonal"}])

    def test_transitions(self):
        self.validate([{**valid_species, "transitions": ["minus"]}])
        with self.assertRaises(ValidationError):
            self.validate([{**valid_species, "transitions": ["minus", "minus"]}])
        with self.assertRaises(ValidationError):
            self.validate([{**valid_species, "transitions": []}])

    def test_unknown_rate(self):
        with self.assertRaises(ValidationError):
            self.validate([{**valid_species, "rates": {"k_magic": 1.0}}])


class ExperimentSchemaTest(unittest.TestCase):
    def setUp(self):
        self.schema = experiment_schema

    def validate(self, obj):
        _validate(obj, self.schema)

    def test_empty(self):
        self.validate({})

    def test_sections(self):
        self.validate({"experiment": {"channel": "ODMR", "seed": 3}, "rabi": {"n_max": 4}})

    def test_unknown_section(self):
        with self.assertRaises(ValidationError):
            self.validate({"plot": {}})

    def test_channel(self):
        with self.assertRaises(ValidationError):
            self.validate({"experiment": {"channel": "ESR"}})

    def test_powers(self):
        with self.assertRaises(ValidationError):
            self.validate({"sweep": {"mw_powers": [1.0]}})


class BundledSchemaTest(unittest.TestCase):
    def test_available(self):
        self.assertEqual(schema.available_schemas(), ["experiment", "registry"])

    def test_unknown_name(self):
        with self.assertRaises(SchemaError):
            schema.get_json_schema("event")


if __name__ == "__main__":
    unittest.main()
