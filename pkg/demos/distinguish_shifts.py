"""Compare a few pairs of shifts with the conservative invariant battery.

Run with ``python3 demos/distinguish_shifts.py``.
"""
from sftacoe.battery import distinguish
from sftacoe.ktheory import bowen_franks, perron_data
from sftacoe.zeta import zeta_rational

FULL2 = [[1, 1], [1, 1]]
FULL3 = [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
FULL4 = [[1] * 4 for _ in range(4)]
GOLDEN = [[1, 1], [1, 0]]
BIG = [[19, 5], [4, 1]]

for name, rows in [("full 2", FULL2), ("golden mean", GOLDEN), ("[[19,5],[4,1]]", BIG)]:
    p = perron_data(rows)
    print(f"{name:16} zeta = {zeta_rational(rows)}   BF = {bowen_franks(rows)}   "
          f"lambda = {p.lam}")

print()
pairs = [("full 2", FULL2, "full 3", FULL3),
         ("full 2", FULL2, "full 4", FULL4),
         ("full 2", FULL2, "golden mean", GOLDEN),
         ("A", BIG, "A^t", [list(r) for r in zip(*BIG)])]
for na, a, nb, b in pairs:
    v = distinguish(a, b)
    reason = v.reason.value if v.reason else "-"
    print(f"{na} vs {nb}: {v.outcome} ({reason})")
    for note in v.evidence["notes"]:
        print(f"    note: {note}")
