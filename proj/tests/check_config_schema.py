"""Validates the shipped configs against the published schema with an
independent JSON Schema implementation."""
import json
import pathlib
import sys

import jsonschema

share = pathlib.Path(sys.argv[1])
schema = json.loads((share / "schema" / "config.v1.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(schema)
validator = jsonschema.Draft202012Validator(schema)
bad = 0
for path in sorted((share / "configs").glob("*.json")):
    errors = list(validator.iter_errors(json.loads(path.read_text())))
    expect_invalid = path.name == "invalid_unknown_key.json"
    if bool(errors) != expect_invalid:
        bad += 1
        print(f"FAIL {path.name}: {[e.message for e in errors]}")
    else:
        print(f"ok   {path.name}")
sys.exit(1 if bad else 0)
