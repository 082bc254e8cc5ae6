"""Check cocycle witnesses between a shift and itself or its inverse.

Run with ``python3 demos/acoe_witnesses.py``.
"""
from sftacoe.acoe import (CocycleWitness, check_acoe, identity_witness, inverse_witness,
                          zeta_transfer_check)
from sftacoe.codes import WindowFunction
from sftacoe.sft import validate

m = validate([[1, 1], [1, 0]])

for label, w in [("identity", identity_witness(m)), ("inverse", inverse_witness(m))]:
    report = check_acoe(w, m, m)
    print(f"{label:9} passed={report.passed}  points={report.points} pairs={report.pairs}")
    print(f"{'':9} zeta transfer ok: {bool(zeta_transfer_check(w, m, m, order=10))}")

# c1 = 2 doubles every orbit length, so the witness cannot be right
w = identity_witness(m)
bad = CocycleWitness(w.h, w.h_inv, WindowFunction.constant(m, 2), w.c2, depth=w.depth)
report = check_acoe(bad, m, m)
print("c1 = 2    passed:", report.passed, " failing:", ", ".join(report.failed))
cond, where = report.first_counterexample()
print(f"          first counterexample at {cond}: {where}")
