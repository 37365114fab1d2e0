"""Runs a small synth/attack-gen/eval pipeline through the love binary and
validates the emitted report against schemas/love_report_v1.schema.json.
Exits 77 (ctest skip) when jsonschema is not installed."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)


def main() -> int:
    love, schema_path = sys.argv[1], Path(sys.argv[2])
    schema = json.loads(schema_path.read_text())
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        train, legit, spoof, report = (tmp / n for n in ("train.csv", "legit.csv", "spoof.csv", "r.json"))
        steps = [
            ["synth", "--seed", "5", "--sensors", "40", "--observations", "8000", "--dialect", "b",
             "--holdout", "0.1", "--holdout-out", str(legit), "-o", str(train)],
            ["attack-gen", "--mode", "spoof", "--corpus", str(train), "--dialect", "b",
             "--seed", "42", "-n", "500", "-o", str(spoof)],
            ["eval", "--corpus", str(train), "--dialect", "b", "--test", str(legit),
             "--test", str(spoof), "--res", "2-7", "--dataset", "schema-check", "-o", str(report)],
        ]
        for args in steps:
            subprocess.run([love, *args], check=True, capture_output=True)
        doc = json.loads(report.read_text())
        jsonschema.validate(doc, schema)
        print(f"{len(doc['reports'])} reports valid against {schema_path.name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
