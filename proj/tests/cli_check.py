"""End-to-end checks of the shorlab binary: exit codes, reproducible output
and JSON reports validated against schemas/."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

BIN = sys.argv[1]
SCHEMAS = pathlib.Path(sys.argv[2])
failures = []


def run(*args, out=None):
    cmd = [BIN] + (["--out", str(out)] if out else []) + list(args)
    return subprocess.run(cmd, capture_output=True, text=True)


def check(cond, what):
    print(("ok   " if cond else "FAIL ") + what)
    if not cond:
        failures.append(what)


def validate(command, args):
    with tempfile.TemporaryDirectory() as tmp:
        r = run(command, *args, out=tmp)
        check(r.returncode == 0, f"{command} {' '.join(args)} exits 0 ({r.stderr.strip()})")
        if r.returncode != 0:
            return
        report = json.loads(r.stdout)
        on_disk = json.loads((pathlib.Path(tmp) / f"{command}.json").read_text())
        check(report == on_disk, f"{command} report written to --out")
        schema = json.loads((SCHEMAS / f"{command}.schema.json").read_text())
        try:
            jsonschema.validate(report, schema)
            check(True, f"{command} {' '.join(args)} matches schema")
        except jsonschema.ValidationError as e:
            check(False, f"{command} {' '.join(args)} schema: {e.message} at {list(e.absolute_path)}")


validate("compile", ["--N", "15", "--C", "2", "--n", "3", "--from", "decomposed"])
validate("compile", ["--N", "21", "--C", "2", "--n", "5", "--pass", "qft-elision"])
validate("run", ["--C", "4", "--shots", "1000"])
validate("run", ["--C", "2", "--level", "partial", "--noise", "preset-paper", "--shots", "500", "--plot"])
validate("run", ["--N", "21", "--C", "2", "--shots", "200"])
validate("tomography", ["state", "--circuit", "fig1d", "--shots", "500", "--bootstrap", "100"])
validate("tomography", ["state", "--circuit", "fig1g", "--exact"])
validate("tomography", ["process", "--gate", "cz", "--vr", "0.85", "--exact"])

# (21,2): elision is reported as not applicable, not an error.
r = run("compile", "--N", "21", "--C", "2", "--n", "5", "--pass", "qft-elision")
check(r.returncode == 0 and not json.loads(r.stdout)["audit"]["passes"][0]["applicable"], "(21,2) elision not applicable")

# Exit codes.
check(run().returncode == 1, "missing subcommand exits 1")
check(run("run", "--bogus").returncode == 1, "unknown option exits 1")
with tempfile.TemporaryDirectory() as tmp:
    bad = pathlib.Path(tmp) / "bad.circ"
    bad.write_text("circuit width=2 arg=[0] func=[1]\nh 0\nfoo 1\n")
    r = run("compile", "--circuit", str(bad))
    check(r.returncode == 2 and "line 3" in r.stderr, "malformed circuit exits 2 with line number")
    noise = pathlib.Path(tmp) / "noise.txt"
    noise.write_text("relative_visibility=0.9\nnonsense\n")
    check(run("run", "--noise", str(noise)).returncode == 2, "malformed noise file exits 2")
check(run("run", "--C", "5").returncode == 3, "non-co-prime base exits 3")
check(run("tomography", "state", "--exact", "--bootstrap", "100").returncode == 3, "bootstrap without shots exits 3")

# Same seed, same bytes.
with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
    args = ["run", "--C", "2", "--noise", "preset-paper", "--shots", "2000", "--seed", "7", "--plot"]
    ra, rb = run(*args, out=a), run(*args, out=b)
    files_a = {p.name: p.read_bytes() for p in pathlib.Path(a).iterdir()}
    files_b = {p.name: p.read_bytes() for p in pathlib.Path(b).iterdir()}
    check(ra.stdout == rb.stdout and files_a == files_b and len(files_a) >= 4, "seed 7 reruns are byte-identical")

sys.exit(1 if failures else 0)
