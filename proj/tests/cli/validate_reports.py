"""Runs the CLI, validates every report against the emitted schema, and checks exit codes."""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

cli = sys.argv[1]
work = Path(tempfile.mkdtemp(prefix="kakeyalab-"))
failures = []


def run(*args, expect=0, env=None):
    proc = subprocess.run([cli, *args], capture_output=True, text=True, env=env)
    if proc.returncode != expect:
        failures.append(f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc


schema = json.loads(run().stdout)
jsonschema.Draft202012Validator.check_schema(schema)
if json.loads(run("schema").stdout) != schema:
    failures.append("'schema' subcommand differs from the no-argument output")
validator = jsonschema.Draft202012Validator(schema)

(work / "inv5.json").write_text(run("construct", "--what", "inverse-perm", "--q", "5").stdout)
(work / "inv5.txt").write_text(" ".join(map(str, json.loads((work / "inv5.json").read_text()))) + "\n")
(work / "par5.json").write_text(run("construct", "--what", "parabola", "--q", "5").stdout)
(work / "semi5.txt").write_text("0 1 3 2 0\n")

inverse7 = json.loads(run("construct", "--what", "inverse-perm", "--q", "7").stdout)
if inverse7 != [0, 1, 4, 5, 2, 3, 6]:
    failures.append(f"inverse-perm q=7 gave {inverse7}")

reports = {
    "suite": ["suite", "--q", "5"],
    "verify_function": ["verify", "--q", "5", "--function", str(work / "inv5.txt")],
    "verify_function_json": ["verify", "--q", "5", "--function", str(work / "inv5.json")],
    "verify_semi": ["verify", "--q", "5", "--function", str(work / "semi5.txt")],
    "verify_cover": ["verify", "--q", "5", "--cover", str(work / "par5.json")],
    "construct_report": ["construct", "--q", "5", "--what", "parabola", "--report"],
    "dualize": ["dualize", "--q", "5", "--cover", str(work / "par5.json")],
    "primalize": ["primalize", "--q", "5", "--function", str(work / "inv5.json")],
    "search_triples": ["search", "--q", "5", "--objective", "triples"],
    "search_besicovitch": ["search", "--q", "5", "--objective", "besicovitch", "--exhaustive"],
    "search_edge": ["search", "--q", "5", "--objective", "isolated-edge"],
    "search_matching": ["search", "--q", "5", "--objective", "matching"],
    "search_sampled": ["search", "--q", "5", "--objective", "triples", "--sample", "200", "--seed", "9"],
    "audit_population": ["audit", "--q", "5"],
    "audit_cover": ["audit", "--q", "5", "--cover", str(work / "par5.json")],
}
docs = {}
for name, args in reports.items():
    out = work / f"{name}.json"
    run(*args, "--out", str(out))
    doc = json.loads(out.read_text())
    docs[name] = doc
    for err in validator.iter_errors(doc):
        failures.append(f"{name}: {err.message} at {list(err.absolute_path)}")
    if doc.get("q") != 5 or "version" not in doc or "command" not in doc.get("provenance", {}):
        failures.append(f"{name}: missing q/version/provenance")

if docs["search_besicovitch"]["result"]["value"] != "17/1":
    failures.append("besicovitch q=5 minimum is not 17")
if docs["primalize"]["result"]["size"] != 17:
    failures.append("primalize of the q=5 inverse map is not 17")
if not all(c["passed"] or not c["asserted"] for c in docs["suite"]["result"]["checks"]):
    failures.append("suite q=5 has failing checks")


def strip_timing(doc):
    if isinstance(doc, dict):
        return {k: strip_timing(v) for k, v in doc.items() if k not in ("wall_time", "seconds", "command")}
    if isinstance(doc, list):
        return [strip_timing(v) for v in doc]
    return doc


# Same command with 1 and 3 workers: identical apart from timing.
for objective in ("triples", "isolated-edge", "besicovitch"):
    a = json.loads(run("search", "--q", "7", "--objective", objective, "--workers", "1").stdout)
    b = json.loads(run("search", "--q", "7", "--objective", objective, "--workers", "3").stdout)
    if strip_timing(a) != strip_timing(b):
        failures.append(f"search {objective}: report depends on worker count")

# Usage errors exit 2.
run("search", "--q", "6", "--objective", "triples", expect=2)
run("search", "--q", "5", "--objective", "nope", expect=2)
run("search", "--q", "5", "--objective", "triples", "--bogus", expect=2)
run("verify", "--q", "5", "--function", str(work / "missing.txt"), expect=2)
(work / "bad.txt").write_text("0 1 2\n")
run("verify", "--q", "5", "--function", str(work / "bad.txt"), expect=2)

if failures:
    print("\n".join(failures))
    sys.exit(1)
print(f"validated {len(docs)} reports against schema v{schema['properties']['schema_version']['const']}")
