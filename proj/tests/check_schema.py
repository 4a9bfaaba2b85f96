"""Runs the CLI on a few inputs and validates each JSON report against the schema."""
import json
import subprocess
import sys

import jsonschema

CASES = [
    ["--strands", "2", "--word", ""],
    ["--strands", "4", "--word", "s2 s2 s2", "--pages"],
    ["--strands", "4", "--word", "s2 s2 s2", "--aux-unknot", "--max-page", "3"],
    ["--strands", "4", "--word", "", "--pages"],
    ["--strands", "6", "--word", "s2 s4 s3^-1", "--mirror", "--timing"],
    ["--strands", "4", "--word", "s2 s2", "--plat", "1-4,2-3/1-2,3-4"],
]


def main():
    cli, schema_path = sys.argv[1], sys.argv[2]
    with open(schema_path) as f:
        schema = json.load(f)
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failed = 0
    for args in CASES:
        out = subprocess.run([cli, *args, "--json"], capture_output=True, text=True)
        if out.returncode != 0:
            print("FAIL", args, "exit", out.returncode, out.stderr)
            failed += 1
            continue
        errors = list(validator.iter_errors(json.loads(out.stdout)))
        for e in errors:
            print("FAIL", args, "/".join(map(str, e.path)), e.message)
        failed += bool(errors)
        if not errors:
            print("ok", args)
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
