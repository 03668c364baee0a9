"""Command line front end: factor, apply, report, and bench subcommands.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a numerical
self-check fails.
"""

import argparse
import hashlib
import io as stdio
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels, storage
from .apply import apply, apply_blocked, apply_to_matrix, apply_transpose, blocked_block_count, wy_chain, _apply_wy
from .dense import ShapeError
from .factor import (
    Placement,
    factor_auto,
    factor_complement,
    factor_tall,
    reconstruct_a,
    storage_floats,
    storage_floats_with_betas,
)

SELF_CHECK_TOLERANCE = 1e-12

_MODES = {
    "tall": factor_tall,
    "complement": factor_complement,
    "auto": factor_auto,
}


@dataclass
class StorageReport:
    """Float counts for the three ways of storing an m x n orthogonal part."""

    m: int
    n: int

    @property
    def dense_floats(self) -> int:
        return self.m * self.n

    @property
    def householder_floats(self) -> int:
        # n (m - (n + 1)/2) is always an integer: n(n + 1)/2 is triangular
        return self.n * self.m - self.n * (self.n + 1) // 2

    @property
    def banded_floats(self) -> int:
        return self.n * (self.m - self.n)

    def lines(self) -> list[str]:
        def percent(num, den):
            return f"{100.0 * num / den:.1f}%" if den else "n/a"

        return [
            f"m={self.m} n={self.n}",
            f"dense:       {self.dense_floats}",
            f"householder: {self.householder_floats:.1f}",
            f"banded:      {self.banded_floats}",
            f"banded/dense:       {percent(self.banded_floats, self.dense_floats)}",
            f"banded/householder: {percent(self.banded_floats, self.householder_floats)}",
        ]


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 1


def _relative_residual(recon: np.ndarray, a: np.ndarray) -> float:
    scale = np.linalg.norm(a)
    resid = np.linalg.norm(recon - a)
    return float(resid / scale) if scale else float(resid)


def _cmd_factor(args) -> int:
    try:
        a = storage.read_matrix(args.input)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    m, n = a.shape
    if m < n:
        return _fail(f"factor requires m >= n, got {m} x {n}")
    f = _MODES[args.mode](a)
    g = f.reflectors
    residual = _relative_residual(reconstruct_a(f), a)
    try:
        with open(args.output, "wb") as fh:
            nbytes = storage.write_factor(f, fh)
    except OSError as exc:
        return _fail(str(exc))
    print(f"placement: {f.placement.name}")
    print(f"storage: {storage_floats(g)} floats (+{g.count} betas)")
    print(f"residual: {residual:.3e}")
    print(f"wrote: {args.output} ({nbytes} bytes)")
    if args.self_check:
        with open(args.output, "rb") as fh:
            reread = storage.read_factor(fh)
        buf = stdio.BytesIO()
        storage.write_factor(reread, buf)
        with open(args.output, "rb") as fh:
            original = fh.read()
        if buf.getvalue() != original:
            print("self-check: FAILED (re-serialization differs)", file=sys.stderr)
            return 2
        reread_residual = _relative_residual(reconstruct_a(reread), a)
        if reread_residual > SELF_CHECK_TOLERANCE:
            print(
                f"self-check: FAILED (residual {reread_residual:.3e} > "
                f"{SELF_CHECK_TOLERANCE:.0e})",
                file=sys.stderr,
            )
            return 2
        print("self-check: ok")
    return 0


def _cmd_apply(args) -> int:
    try:
        with open(args.factor, "rb") as fh:
            f = storage.read_factor(fh)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    try:
        vec = storage.read_matrix(args.vector)
    except (OSError, ValueError) as exc:
        return _fail(str(exc))
    if vec.shape[1] != 1:
        return _fail(f"expected a column vector, got {vec.shape[0]} x {vec.shape[1]}")
    g = f.reflectors
    if vec.shape[0] != g.ambient_dim:
        return _fail(
            f"vector length {vec.shape[0]} does not match factor dimension "
            f"{g.ambient_dim}"
        )
    x = vec[:, 0]
    result = apply_transpose(g, x) if args.transpose else apply(g, x)
    storage.write_matrix(result.reshape(-1, 1), sys.stdout)
    return 0


def _cmd_report(args) -> int:
    if args.m < args.n or args.n < 0:
        return _fail(f"report requires m >= n >= 0, got m={args.m} n={args.n}")
    for line in StorageReport(args.m, args.n).lines():
        print(line)
    return 0


def _time_per_call(func, repetitions: int) -> float:
    func()  # warm-up, compile and touch caches
    best = float("inf")
    for _ in range(repetitions):
        t0 = time.perf_counter()
        func()
        best = min(best, time.perf_counter() - t0)
    return best


def _print_timing(label: str, seconds: float, flops: int) -> None:
    rate = f"{flops / seconds:.3e} flops/s" if seconds > 0 and flops else "n/a"
    print(f"{label}: {seconds * 1e9:.0f} ns/matvec, {rate}")


def _cmd_bench(args) -> int:
    if args.m < args.n:
        return _fail(f"bench requires m >= n, got {args.m} x {args.n}")
    if args.repetitions < 1:
        return _fail("repetitions must be at least 1")
    if args.block_size < 1:
        return _fail("block size must be at least 1")
    rng = np.random.default_rng(args.seed)
    a = rng.standard_normal((args.m, args.n))
    f = factor_auto(a)
    g = f.reflectors
    buf = stdio.BytesIO()
    storage.write_factor(f, buf)
    data = buf.getvalue()
    print(f"seed: {args.seed}")
    print(f"placement: {f.placement.name}")
    print(f"factor bytes: {len(data)} sha256: {hashlib.sha256(data).hexdigest()}")
    print(f"storage: {storage_floats(g)} floats (+{g.count} betas), "
          f"{storage_floats_with_betas(g)} total")
    k, w = g.count, g.bandwidth
    banded_flops = 4 * k * w + 2 * k
    dense_flops = 2 * args.m * args.m
    print(f"banded matvec flops: {banded_flops}")
    x = rng.standard_normal(args.m)
    reps = args.repetitions

    dense_g = apply_to_matrix(g, np.eye(args.m))
    _print_timing("dense matvec", _time_per_call(lambda: dense_g @ x, reps), dense_flops)

    free, betas = g.free_entries, g.betas
    y = x.copy()
    _print_timing(
        f"banded matvec ({_kernels.backend()})",
        _time_per_call(lambda: _kernels.apply_banded(free, betas, y, True), reps),
        banded_flops,
    )
    if _kernels.HAVE_NUMBA:
        z = x.copy()
        _print_timing(
            "banded matvec (numpy fallback)",
            _time_per_call(lambda: _kernels.apply_banded_numpy(free, betas, z, True), reps),
            banded_flops,
        )

    if k:
        chain = wy_chain(g, args.block_size)
        print(f"blocked: block size {args.block_size}, "
              f"blocks {blocked_block_count(k, args.block_size)}")
        u = x.copy()

        def run_blocked():
            for blk in reversed(chain):
                _apply_wy(blk, w, u)

        _print_timing("blocked matvec", _time_per_call(run_blocked, reps), banded_flops)
    else:
        print(f"blocked: block size {args.block_size}, blocks 0")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandedhh",
        description="Factor matrices into banded Householder form and apply them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_factor = sub.add_parser("factor", help="factor a matrix text file")
    p_factor.add_argument("input", help="input matrix in text form")
    p_factor.add_argument("output", help="output factor file")
    p_factor.add_argument("--mode", choices=sorted(_MODES), default="auto")
    p_factor.add_argument(
        "--self-check",
        action="store_true",
        help="re-read the written file and verify bytes and residual",
    )
    p_factor.set_defaults(func=_cmd_factor)

    p_apply = sub.add_parser("apply", help="apply a stored factor to a vector")
    p_apply.add_argument("factor", help="factor file")
    p_apply.add_argument("vector", help="vector as an m x 1 matrix text file")
    p_apply.add_argument("--transpose", action="store_true")
    p_apply.set_defaults(func=_cmd_apply)

    p_report = sub.add_parser("report", help="print storage counts for m, n")
    p_report.add_argument("m", type=int)
    p_report.add_argument("n", type=int)
    p_report.set_defaults(func=_cmd_report)

    p_bench = sub.add_parser("bench", help="time matvec paths on a seeded matrix")
    p_bench.add_argument("m", type=int)
    p_bench.add_argument("n", type=int)
    p_bench.add_argument("--repetitions", "--reps", type=int, default=10)
    p_bench.add_argument("--block-size", type=int, default=8)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except ShapeError as exc:
        return _fail(str(exc))


if __name__ == "__main__":
    sys.exit(main())
