"""Invariant battery for telling pairs of Markov shifts apart.

Only invariants of the asymptotic Ruelle algebra can produce a
``distinguished`` verdict: the value group ``Z[1/N]`` of the trace on a
full N-shift, and the fact that a non-integer Perron eigenvalue forces
irrational trace values.  Zeta functions and Bowen-Franks groups are
reported as evidence only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .ktheory import bowen_franks, perron_data, period, prime_factors
from .sft import SftMatrix, validate
from .zeta import zeta_rational


class Reason(str, Enum):
    ZETA_MISMATCH_NOT_APPLICABLE = "ZetaMismatchNotApplicable"
    TRACE_PRIMES = "TracePrimes"
    PERRON_INTEGRALITY = "PerronIntegrality"
    BOWEN_FRANKS = "BowenFranks"


@dataclass(frozen=True)
class Verdict:
    outcome: str  # "distinguished" | "inconclusive"
    reason: Reason | None
    evidence: dict

    @property
    def distinguished(self) -> bool:
        return self.outcome == "distinguished"

    def to_json(self) -> dict:
        return {"outcome": self.outcome, "reason": self.reason.value if self.reason else None,
                "evidence": self.evidence}


def full_shift_size(matrix: SftMatrix) -> int | None:
    """N when the matrix is ``[N]`` or the all-ones N x N matrix."""
    if matrix.n == 1:
        return matrix.entries[0][0] if matrix.entries[0][0] >= 2 else None
    return matrix.n if all(v == 1 for row in matrix.entries for v in row) else None


def evidence(matrix) -> dict:
    m = validate(matrix, sft=False)
    p = perron_data(m)
    z = zeta_rational(m)
    n = full_shift_size(m)
    return {
        "matrix": m.rows(),
        "full_shift": n,
        "trace_primes": list(prime_factors(n)) if n else None,
        "perron_lambda": float(p.lam),
        "perron_is_integer": p.lambda_is_integer,
        "char_poly": list(p.char_poly),
        "period": period(m),
        "bowen_franks": bowen_franks(m).to_json(),
        "zeta": z.to_json(),
    }


def verdict_from_evidence(ea: dict, eb: dict) -> tuple[str, Reason | None]:
    """Decide from serialised evidence alone, symmetrically in the two sides."""
    if ea["full_shift"] and eb["full_shift"]:
        if ea["trace_primes"] != eb["trace_primes"]:
            return "distinguished", Reason.TRACE_PRIMES
        return "inconclusive", None
    for full, other in ((ea, eb), (eb, ea)):
        # trace values of a full shift lie in Z[1/N]; a non-integer Perron
        # eigenvalue makes some trace value irrational
        if full["full_shift"] and not other["perron_is_integer"]:
            return "distinguished", Reason.PERRON_INTEGRALITY
    return "inconclusive", None


def distinguish(a, b) -> Verdict:
    ea, eb = evidence(a), evidence(b)
    outcome, reason = verdict_from_evidence(ea, eb)
    notes = []
    if ea["zeta"] != eb["zeta"]:
        notes.append("zeta functions differ; not used (not an invariant without a witness)")
    if ea["bowen_franks"] != eb["bowen_franks"]:
        notes.append("Bowen-Franks groups differ; not used (not certified as an invariant here)")
    return Verdict(outcome, reason, {"a": ea, "b": eb, "notes": notes})
