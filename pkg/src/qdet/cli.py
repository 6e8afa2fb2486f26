"""``qdet`` command line: build matrices, take determinants, run verification sweeps.

Exit codes: 0 all checks pass, 1 at least one FAIL, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from typing import Sequence

from qdet.errors import QDetError
from qdet.linalg import det_bareiss
from qdet.qmatrix import MatrixKind, MatrixSpec, build
from qdet.reports import IdentityId, to_csv, to_jsonl
from qdet.verify import default_jobs, expected_det, run_suite

_RANGE_RE = re.compile(r"^(-?\d+)(?:\.\.(-?\d+))?$")


class ConfigError(ValueError):
    pass


def parse_range(text: str, step: int = 1) -> list[int]:
    """'lo..hi' (inclusive, stepping from lo) or a single integer."""
    m = _RANGE_RE.match(text.strip())
    if not m:
        raise ConfigError(f"bad range {text!r}; expected an integer or lo..hi")
    lo = int(m[1])
    hi = int(m[2]) if m[2] is not None else lo
    if hi < lo:
        raise ConfigError(f"empty range {text!r}")
    return list(range(lo, hi + 1, step))


def check_odd(values: Sequence[int]) -> None:
    bad = [v for v in values if v < 1 or v % 2 == 0]
    if bad:
        shown = ", ".join(map(str, bad[:10])) + (" ..." if len(bad) > 10 else "")
        raise ConfigError(f"n must be odd and positive; offending values: {shown}")


@dataclass
class CliConfig:
    command: str
    kind: MatrixKind | None = None
    a_values: list[int] | None = None
    n_values: list[int] = field(default_factory=list)
    identities: list[IdentityId] = field(default_factory=list)
    fmt: str = "text"
    out: str | None = None
    jobs: int = 1
    tol: float | None = None
    expected: bool = False

    def validate(self) -> None:
        if not self.n_values:
            raise ConfigError("n range is empty")
        check_odd(self.n_values)
        if self.a_values is not None and not self.a_values:
            raise ConfigError("a range is empty")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError("tolerance must be positive")
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")


def _identity(text: str) -> IdentityId:
    try:
        return IdentityId(text.strip().lower().replace("_", "-"))
    except ValueError:
        names = ", ".join(i.value for i in IdentityId)
        raise argparse.ArgumentTypeError(f"unknown identity {text!r}; choose from {names}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdet", description="Exact determinants of q-integer floor/ceiling matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    kinds = [k.value for k in MatrixKind]
    for name, help_text in (("matrix", "print a matrix"), ("det", "print an exact determinant")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--kind", required=True, choices=kinds)
        p.add_argument("-a", type=int, required=True)
        p.add_argument("-n", type=int, required=True)
        p.add_argument("--format", dest="fmt", choices=("text", "json"), default="text")
        p.add_argument("--out", help="write output to PATH instead of stdout")
        if name == "det":
            p.add_argument("--expected", action="store_true",
                           help="also compare with the closed form; exit 1 on mismatch")

    p = sub.add_parser("verify", help="run identity sweeps")
    p.add_argument("-a", dest="a_range", help="a or lo..hi (default -6..6)")
    p.add_argument("-n", dest="n_range", required=True, help="odd n or lo..hi, stepping by 2 from lo; even values rejected")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--identity", type=_identity, action="append", dest="identities")
    g.add_argument("--all", action="store_true")
    p.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=None,
                   help="worker processes (default: $QDET_JOBS or the core count)")
    p.add_argument("--tol", type=float, default=None,
                   help="absolute tolerance for the floating-point checks")
    return parser


def _normalize_argv(argv: Sequence[str]) -> list[str]:
    # argparse reads "-a -6..6" as two options; glue negative ranges on.
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("-a", "-n"):
            nxt = next(it, None)
            if nxt is not None and _RANGE_RE.match(nxt):
                out.append(tok + nxt)
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def _config(args: argparse.Namespace) -> CliConfig:
    if args.command == "verify":
        idents = list(IdentityId) if args.all else args.identities
        cfg = CliConfig(
            "verify",
            a_values=None if args.a_range is None else parse_range(args.a_range),
            # n ranges step by 2 from lo: 1..25 means the odd values, while an
            # even lo such as 2..4 yields only even values and is rejected
            n_values=parse_range(args.n_range, step=2),
            identities=idents, fmt=args.fmt, out=args.out,
            jobs=args.jobs if args.jobs is not None else default_jobs(), tol=args.tol)
    else:
        cfg = CliConfig(args.command, kind=MatrixKind(args.kind), a_values=[args.a],
                        n_values=[args.n], fmt=args.fmt, out=args.out,
                        expected=getattr(args, "expected", False))
    cfg.validate()
    return cfg


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_matrix(cfg: CliConfig) -> int:
    M = build(MatrixSpec(cfg.kind, cfg.a_values[0], cfg.n_values[0]))
    text = json.dumps(M.to_json()) if cfg.fmt == "json" else M.to_text()
    _emit(text + "\n", cfg.out)
    return 0


def cmd_det(cfg: CliConfig) -> int:
    spec = MatrixSpec(cfg.kind, cfg.a_values[0], cfg.n_values[0])
    det = det_bareiss(build(spec))
    var = spec.variable
    lhs = det.to_str(var)
    status = 0
    if cfg.fmt == "json":
        record = {"kind": spec.kind.value, "a": spec.a, "n": spec.n, "variable": var, "det": lhs}
        if cfg.expected:
            rhs = expected_det(spec)
            record.update(expected=rhs.to_str(var), **{"pass": det == rhs})
            status = 0 if det == rhs else 1
        text = json.dumps(record)
    elif cfg.expected:
        rhs = expected_det(spec)
        if det == rhs:
            text = f"{lhs}  PASS"
        else:
            text = f"{lhs}  FAIL (expected {rhs.to_str(var)})"
            status = 1
    else:
        text = lhs
    _emit(text + "\n", cfg.out)
    return status


def cmd_verify(cfg: CliConfig) -> int:
    reports = run_suite(cfg.a_values, cfg.n_values, cfg.identities, jobs=cfg.jobs,
                        tol=cfg.tol)
    failures = sum(r.failed for r in reports)
    passed = sum(r.passed for r in reports)
    skipped = sum(r.skipped for r in reports)
    summary = f"{len(reports)} checks: {passed} passed, {skipped} skipped, {failures} failures"
    if cfg.fmt == "json":
        _emit(to_jsonl(reports), cfg.out)
    elif cfg.fmt == "csv":
        _emit(to_csv(reports), cfg.out)
    else:
        _emit("".join(r.to_text() + "\n" for r in reports) + summary + "\n", cfg.out)
    if cfg.fmt != "text" or cfg.out:
        print(summary, file=sys.stderr)
    return 1 if failures else 0


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_normalize_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config(args)
    except (ConfigError, QDetError) as exc:
        print(f"qdet: error: {exc}", file=sys.stderr)
        return 2
    handler = {"matrix": cmd_matrix, "det": cmd_det, "verify": cmd_verify}[cfg.command]
    try:
        return handler(cfg)
    except QDetError as exc:
        print(f"qdet: error: {exc.code}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
