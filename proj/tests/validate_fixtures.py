"""Checks every bundled session line against the machine-readable schema."""
import json
import pathlib
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
schema = json.loads((root / "schema" / "session.schema.json").read_text())
validator = jsonschema.Draft202012Validator(schema)
bad = 0
for path in sorted((root / "data" / "sessions").glob("*.jsonl")):
    for n, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        for err in validator.iter_errors(json.loads(line)):
            print(f"{path.name}:{n}: {err.message}")
            bad += 1
print(f"{bad} schema violations")
sys.exit(1 if bad else 0)
