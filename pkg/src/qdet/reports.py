"""Identity identifiers and the report record shared by exact and numeric checks."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable


class IdentityId(str, Enum):
    THM_FLOOR = "thm-floor"
    THM_CEIL = "thm-ceil"
    THM_X_FLOOR = "thm-x-floor"
    THM_X_CEIL = "thm-x-ceil"
    COR_1FLOOR = "cor-1floor"
    COR_2FLOOR = "cor-2floor"
    COR_1CEIL = "cor-1ceil"
    COR_2CEIL = "cor-2ceil"
    COR_NEG1 = "cor-neg1"
    COR_2POW_FLOOR = "cor-2pow-floor"
    COR_2POW_CEIL = "cor-2pow-ceil"
    PROP_DETQ = "prop-detq"
    PROP_QINV = "prop-qinv"
    SUM_S = "sum-s"
    SUM_SPRIME = "sum-sprime"
    RANK_BOUND = "rank-bound"
    ZOLOTAREV = "zolotarev"
    FACTOR_BQC = "factor-bqc"
    RANK_ONE_UPDATE = "rank-one-update"
    # floating-point checks of the root-of-unity machinery
    UCV_FACTOR = "ucv-factor"
    DETQ_NUMERIC = "detq-numeric"
    DFT_ROUNDTRIP = "dft-roundtrip"
    VANDERMONDE_INV = "vandermonde-inv"

    def __str__(self) -> str:
        return self.value

    @property
    def order(self) -> int:
        return _ORDER[self]

    @property
    def numeric(self) -> bool:
        return self in NUMERIC_IDS


_ORDER = {ident: i for i, ident in enumerate(IdentityId)}
NUMERIC_IDS = frozenset({
    IdentityId.UCV_FACTOR,
    IdentityId.DETQ_NUMERIC,
    IdentityId.DFT_ROUNDTRIP,
    IdentityId.VANDERMONDE_INV,
})

CSV_COLUMNS = ("identity", "a", "n", "pass", "lhs", "rhs", "elapsed_ms")


@dataclass
class VerificationReport:
    """Outcome of one identity at one parameter pair.

    For equalities ``passed`` is exactly ``lhs == rhs`` on canonical forms;
    inequality checks (rank bound, numeric residuals) put the measured value
    in ``lhs`` and the bound in ``rhs``.
    """

    identity: IdentityId
    a: int
    n: int
    lhs: str
    rhs: str
    passed: bool
    elapsed_ms: float = 0.0
    skipped: bool = False
    numeric: bool = False
    detail: str = ""

    @property
    def failed(self) -> bool:
        return not self.passed and not self.skipped

    @property
    def status(self) -> str:
        if self.skipped:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"

    def sort_key(self) -> tuple:
        return (IdentityId(self.identity).order, self.n, self.a)

    def to_dict(self) -> dict:
        return {
            "identity": str(self.identity),
            "a": self.a,
            "n": self.n,
            "pass": self.passed,
            "skipped": self.skipped,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "elapsed_ms": round(self.elapsed_ms, 3),
            "numeric": self.numeric,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_text(self) -> str:
        line = f"{self.status}  {self.identity}  a={self.a} n={self.n}  lhs={self.lhs}  rhs={self.rhs}"
        if self.detail:
            line += f"  ({self.detail})"
        return line

    def csv_row(self) -> list:
        pass_cell = "skip" if self.skipped else str(self.passed).lower()
        return [str(self.identity), self.a, self.n, pass_cell, self.lhs, self.rhs,
                f"{self.elapsed_ms:.3f}"]


def skipped(identity: IdentityId, a: int, n: int, reason: str) -> VerificationReport:
    return VerificationReport(identity, a, n, "", "", False, skipped=True,
                              numeric=identity in NUMERIC_IDS, detail=reason)


def to_jsonl(reports: Iterable[VerificationReport]) -> str:
    return "".join(r.to_json() + "\n" for r in reports)


def to_csv(reports: Iterable[VerificationReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(r.csv_row())
    return buf.getvalue()
