"""Run each JSON-emitting subcommand and validate its output against schema/."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema


def main() -> int:
    hsic, schema_dir = sys.argv[1], Path(sys.argv[2])
    schemas = {p.name.split(".")[0]: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        data = tmp / "xor.csv"
        subprocess.run([hsic, "synth", "--dataset", "xor", "--samples", "60", "--seed", "1", "--out", data], check=True)

        documents = {}
        out = subprocess.run([hsic, "hsic", "--data", data, "--perms", "99", "--json"],
                             check=True, capture_output=True, text=True)
        documents["hsic"] = json.loads(out.stdout)

        ranking = tmp / "ranking.json"
        subprocess.run([hsic, "select", "--data", data, "--num-features", "2", "--out", ranking],
                       check=True, capture_output=True)
        documents["ranking"] = json.loads(ranking.read_text())

        bench = tmp / "bench.json"
        subprocess.run([hsic, "bench", "--dataset", "regression", "--sizes", "40", "--runs", "2",
                        "--out", bench], check=True, capture_output=True)
        documents["benchmark"] = json.loads(bench.read_text())

    for name, doc in documents.items():
        jsonschema.Draft202012Validator.check_schema(schemas[name])
        jsonschema.validate(doc, schemas[name], cls=jsonschema.Draft202012Validator)
        print(f"{name}: valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
