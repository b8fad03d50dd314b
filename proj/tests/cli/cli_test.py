"""End-to-end checks of the feller executable: exit codes, determinism,
--only selection and the verify report schema.

Usage: cli_test.py FELLER_BINARY SCHEMA_PATH
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

FAILURES = []


def run(binary, *args):
    return subprocess.run([binary, *args], capture_output=True, timeout=300)


def expect(condition, message):
    print(("ok    " if condition else "FAIL  ") + message)
    if not condition:
        FAILURES.append(message)


def main():
    binary, schema_path = sys.argv[1], sys.argv[2]
    schema = json.loads(Path(schema_path).read_text())

    pmf = ["pmf", "--t", "1", "--s", "1", "--alpha", "0", "--x0", "1"]
    first, second = run(binary, *pmf), run(binary, *pmf)
    expect(first.returncode == 0, "pmf exits 0")
    expect(first.stdout == second.stdout, "pmf output is byte-identical across runs")
    row = first.stdout.decode().splitlines()[1].split(",")
    expect(row[0] == "0" and abs(float(row[1]) - 0.1353352832366127) < 1e-16,
           "pmf row k=0 is exp(-2)")

    tree = ["rrp-tree", "--n", "500", "--s", "0.001", "--alpha", "1"]
    a, b = run(binary, *tree), run(binary, *tree)
    expect(a.returncode == 0 and a.stdout == b.stdout, "rrp-tree is deterministic")
    expect(a.stdout.decode().rstrip().endswith(";"), "newick ends with ';'")
    with tempfile.TemporaryDirectory() as tmp:
        times = Path(tmp) / "times.csv"
        out = Path(tmp) / "tree.nwk"
        r = run(binary, *tree, "--times-output", str(times), "--output", str(out))
        expect(r.returncode == 0 and r.stdout == b"", "--output redirects stdout")
        expect(out.read_bytes() == a.stdout, "--output file matches stdout run")
        expect(len(times.read_text().splitlines()) == 500, "times CSV has 499 rows")

    sim = ["simulate", "--what", "feller", "--t", "1", "--alpha", "0.5", "--x0", "1",
           "--replicates", "50"]
    expect(run(binary, *sim).stdout == run(binary, *sim).stdout,
           "simulate is deterministic under the default seed")
    expect(run(binary, *sim).stdout != run(binary, *sim, "--seed", "5").stdout,
           "simulate depends on --seed")

    for args, label in [
        (["qs", "--alpha", "0.5", "--s", "1"], "qs with alpha >= 0"),
        (["rrp-tree", "--n", "5", "--s", "0.1", "--alpha", "-1"], "rrp-tree with alpha <= 0"),
        (["pmf", "--t", "1", "--s", "2", "--alpha", "0", "--x0", "1"], "pmf with s > t"),
        (["pmf", "--t", "1"], "pmf with missing flags"),
        (["pmf", "--bogus"], "unknown flag"),
        (["verify", "--only", "no-such-check"], "unknown --only selector"),
        ([], "no subcommand"),
    ]:
        expect(run(binary, *args).returncode == 2, f"{label} exits 2")

    v = run(binary, "verify", "--only", "polya-aeppli-pgf,rate-round-trip")
    expect(v.returncode == 0, "verify --only exits 0")
    report = json.loads(v.stdout)
    ids = [c["id"] for c in report["checks"]]
    expect(ids == ["polya-aeppli-pgf", "rate-round-trip"], "verify --only runs exactly those checks")
    try:
        jsonschema.validate(report, schema)
        valid = True
    except jsonschema.ValidationError as e:
        print(e)
        valid = False
    expect(valid, "verify report validates against the schema")

    by_criterion = json.loads(run(binary, "verify", "--only", "7").stdout)
    expect({c["criterion"] for c in by_criterion["checks"]} == {7} and
           len(by_criterion["checks"]) >= 1, "verify --only 7 selects criterion 7")

    helptext = run(binary, "--help").stdout.decode()
    expect("20230601" in helptext, "--help documents the default seed")

    print(f"{len(FAILURES)} failure(s)")
    return 1 if FAILURES else 0


if __name__ == "__main__":
    sys.exit(main())
