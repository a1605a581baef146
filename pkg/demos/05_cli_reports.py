"""Driving the command-line tool from Python.

Writes a JSON verification report, an evolve time series, a gamma scan and
an Ermakov-Pinney comparison into a scratch directory, then reads a few
numbers back.  The same runs from a shell:

    dysonspin verify --spin 1/2 --gamma 0.6 --c2 1 --c3 0 --out report.json
    dysonspin evolve --spin 1 --coeff 1=1 --coeff=-1=0.5j --tmax 5 --dt 0.01 --out evolve.csv
    dysonspin scan --spin 3/2 --gamma-min 0 --gamma-max 1.5 --steps 151 --out scan.csv
    dysonspin ep --spin 1/2 --c2 1 --c3 -0.5 --out ep.csv
"""
import csv
import json
import tempfile
from pathlib import Path

from dysonspin.cli import main

out = Path(tempfile.mkdtemp(prefix="dysonspin-"))

code = main(["verify", "--spin", "1/2", "--gamma", "0.6", "--c2", "1", "--c3", "0",
             "--out", str(out / "report.json")])
report = json.loads((out / "report.json").read_text())
print(f"verify exit {code}, summary {report['summary']}")
for c in report["checks"]:
    print(f"  {c['name']:<26} {c['residual']:.2e} <= {c['tol']:.0e}  {'ok' if c['pass'] else 'FAIL'}")

main(["evolve", "--spin", "1", "--coeff", "1=1", "--coeff=-1=0.5j", "--tmax", "5", "--dt", "0.01",
      "--out", str(out / "evolve.csv")])
rows = list(csv.DictReader((out / "evolve.csv").open()))
norms = [float(r["phi_norm"]) for r in rows]
print(f"evolve: {len(rows)} rows, <phi|phi> in [{min(norms):.12f}, {max(norms):.12f}]")

main(["scan", "--spin", "3/2", "--gamma-min", "0", "--gamma-max", "1.5", "--steps", "151",
      "--out", str(out / "scan.csv")])
rows = list(csv.DictReader((out / "scan.csv").open()))
first = next(r for r in rows if r["regime"] != "unbroken")
print(f"scan: first non-real spectrum at gamma = {float(first['gamma']):.2f} ({first['regime']})")

main(["ep", "--spin", "1/2", "--c2", "1", "--c3", "-0.5", "--out", str(out / "ep.csv")])
rows = list(csv.DictReader((out / "ep.csv").open()))
print(f"ep: max |closed - RK4| = {max(float(r['abs_diff']) for r in rows):.2e}")
print(f"files in {out}")
