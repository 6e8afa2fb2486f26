"""Run an identity sweep and write the reports to CSV or JSON lines.

    python3 scripts/sweep.py --n-max 25 --a-min -6 --a-max 6 --out results/sweep.csv
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from pathlib import Path

from qdet.reports import IdentityId, to_csv, to_jsonl
from qdet.verify import default_jobs, run_suite


@dataclass
class SweepConfig:
    n_max: int = 25
    a_min: int = -6
    a_max: int = 6
    identities: list[IdentityId] = field(default_factory=lambda: list(IdentityId))
    jobs: int = 1
    out: Path | None = None

    @property
    def n_values(self) -> list[int]:
        return list(range(1, self.n_max + 1, 2))

    @property
    def a_values(self) -> list[int]:
        return list(range(self.a_min, self.a_max + 1))


def parse_args() -> SweepConfig:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-max", type=int, default=25)
    p.add_argument("--a-min", type=int, default=-6)
    p.add_argument("--a-max", type=int, default=6)
    p.add_argument("--identity", action="append", type=IdentityId, dest="identities")
    p.add_argument("--jobs", type=int, default=default_jobs())
    p.add_argument("--out", type=Path)
    ns = p.parse_args()
    return SweepConfig(ns.n_max, ns.a_min, ns.a_max, ns.identities or list(IdentityId),
                       ns.jobs, ns.out)


def main() -> int:
    cfg = parse_args()
    start = time.perf_counter()
    reports = run_suite(cfg.a_values, cfg.n_values, cfg.identities, jobs=cfg.jobs)
    elapsed = time.perf_counter() - start

    per_identity: dict[str, list[int]] = {}
    for r in reports:
        c = per_identity.setdefault(str(r.identity), [0, 0, 0, 0.0])
        c[0] += r.passed
        c[1] += r.skipped
        c[2] += r.failed
        c[3] += r.elapsed_ms
    print(f"{'identity':<18} {'pass':>6} {'skip':>6} {'fail':>6} {'ms':>10}")
    for ident, (p, s, f, ms) in per_identity.items():
        print(f"{ident:<18} {p:>6} {s:>6} {f:>6} {ms:>10.1f}")
    failures = sum(r.failed for r in reports)
    print(f"{len(reports)} reports in {elapsed:.1f}s, {failures} failures")

    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        text = to_jsonl(reports) if cfg.out.suffix in (".jsonl", ".json") else to_csv(reports)
        cfg.out.write_text(text)
        print(f"wrote {cfg.out}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
