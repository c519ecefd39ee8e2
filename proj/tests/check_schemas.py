"""Validates bundled problem files and live result documents against docs/schema."""
import json
import pathlib
import subprocess
import sys

import jsonschema

root = pathlib.Path(sys.argv[1])
tool = sys.argv[2]
problem = json.loads((root / "docs/schema/problem.v1.schema.json").read_text())
result = json.loads((root / "docs/schema/result.v1.schema.json").read_text())
jsonschema.Draft202012Validator.check_schema(problem)
jsonschema.Draft202012Validator.check_schema(result)

examples = sorted((root / "examples").glob("*.json")) + sorted((root / "tests/data").glob("*.json"))
assert examples, "no problem files found"
for path in examples:
    jsonschema.validate(json.loads(path.read_text()), problem)

runs = [
    ["separate", "--input", str(root / "examples/example1.json")],
    ["separate", "--input", str(root / "examples/example2.json")],
    ["extend", "--input", str(root / "examples/example2.json")],
    ["roundtrip", "--input", str(root / "examples/example1.json")],
    ["gauge", "--input", str(root / "examples/example1.json"), "--point", "3,-4"],
    ["conic", "--input", str(root / "examples/example1.json"), "--point", "2,1"],
    ["verify", "--input", str(root / "examples/example1.json"), "--point", "0,1"],
    ["separate", "--input", str(root / "examples/missing.json")],
    ["separate", "--input", str(root / "tests/data/oracle_disk.json"), "--tol", "1"],
]
for args in runs:
    out = subprocess.run([tool, *args], capture_output=True, text=True).stdout
    jsonschema.validate(json.loads(out), result)
print(f"{len(examples)} problem files and {len(runs)} result documents valid")
