"""Validates audit reports from the CLI against the shipped schema with the jsonschema package."""
import json
import subprocess
import sys

import jsonschema


def main() -> int:
    tool, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    runs = [
        ["audit", "assumptions", "--p", "2"],
        ["audit", "assumptions", "--p", "3", "--jobs", "2"],
        ["audit", "mackey", "--group", "S3", "--p", "3"],
        ["audit", "mackey", "--group", "A4", "--p", "2"],
    ]
    for args in runs:
        proc = subprocess.run([tool, *args, "--format", "json"], capture_output=True, text=True)
        if proc.returncode not in (0, 3):
            print(f"{' '.join(args)}: exit {proc.returncode}\n{proc.stderr}")
            return 1
        jsonschema.Draft202012Validator(schema).validate(json.loads(proc.stdout))
        print(f"{' '.join(args)}: valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
