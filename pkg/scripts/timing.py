"""Wall-clock cost of the exact determinants as n grows, one row per (kind, n).

    python3 scripts/timing.py --n-max 25 --a 2
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

from qdet.linalg import det_bareiss
from qdet.qmatrix import MatrixKind, MatrixSpec, build
from qdet.verify import expected_det


@dataclass(frozen=True)
class TimingConfig:
    n_max: int = 25
    a: int = 2
    kinds: tuple[MatrixKind, ...] = tuple(MatrixKind)
    repeats: int = 1


def time_one(spec: MatrixSpec, repeats: int) -> tuple[float, bool, int]:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        det = det_bareiss(build(spec))
        best = min(best, time.perf_counter() - start)
    terms = len(det.coeffs) if hasattr(det, "coeffs") else 0
    return best, det == expected_det(spec), terms


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n-max", type=int, default=25)
    p.add_argument("-a", "--a", type=int, default=2)
    p.add_argument("--repeats", type=int, default=1)
    ns = p.parse_args()
    cfg = TimingConfig(ns.n_max, ns.a, repeats=ns.repeats)

    print(f"{'kind':<20} {'n':>3} {'seconds':>9} {'len':>6}  closed form")
    for kind in cfg.kinds:
        for n in range(1, cfg.n_max + 1, 2):
            if kind in (MatrixKind.FLOOR_X, MatrixKind.CEIL_X) and n > 15:
                break
            secs, ok, terms = time_one(MatrixSpec(kind, cfg.a, n), cfg.repeats)
            print(f"{kind.value:<20} {n:>3} {secs:>9.4f} {terms:>6}  {'ok' if ok else 'MISMATCH'}")


if __name__ == "__main__":
    main()
