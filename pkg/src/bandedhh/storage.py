"""Bit-exact persistence: a binary factor format and a text matrix format.

Factor files ("BHF1"):

    offset  size            content
    0       4               magic bytes "BHF1"
    4       20              five little-endian uint32: m, n, placement
                            (0 = TOP, 1 = BOTTOM), count k, bandwidth w
    24      8 k             betas, little-endian IEEE-754 doubles
    24+8k   8 k w           free entries, row-major by reflection
    ...     8 n^2           core, row-major

The total length is exactly 24 + 8 (k + k w + n^2) bytes and a write/read
round trip is bit-identical.

Matrix text files: a header line "m n" followed by m lines of n numbers
separated by single spaces. The writer emits 17 significant digits, which
round-trips every finite double exactly.
"""

import struct

import numpy as np

from .dense import as_matrix
from .factor import BandedReflectors, CompactSubspaceFactor, Placement

__all__ = [
    "MAGIC",
    "FactorFormatError",
    "BadMagicError",
    "TruncatedPayloadError",
    "DimensionError",
    "MatrixFormatError",
    "factor_byte_length",
    "write_factor",
    "read_factor",
    "write_matrix",
    "read_matrix",
]

MAGIC = b"BHF1"
_HEADER = struct.Struct("<5I")


class FactorFormatError(ValueError):
    """A factor byte stream violates the format."""


class BadMagicError(FactorFormatError):
    """The stream does not start with the BHF1 magic."""


class TruncatedPayloadError(FactorFormatError):
    """The stream ended before the declared payload was complete."""


class DimensionError(FactorFormatError):
    """Header dimensions are internally inconsistent."""


class MatrixFormatError(ValueError):
    """A matrix text file is malformed."""


def factor_byte_length(m: int, n: int, k: int, w: int) -> int:
    """Exact file size for the given header dimensions."""
    del m
    return len(MAGIC) + _HEADER.size + 8 * (k + k * w + n * n)


def write_factor(f: CompactSubspaceFactor, sink) -> int:
    """Serialize f to a binary stream; returns the exact byte count."""
    g = f.reflectors
    m, n = g.ambient_dim, f.core.shape[0]
    k, w = g.count, g.bandwidth
    sink.write(MAGIC)
    sink.write(_HEADER.pack(m, n, f.placement.value, k, w))
    sink.write(g.betas.astype("<f8", copy=False).tobytes())
    sink.write(g.free_entries.astype("<f8", copy=False).tobytes())
    sink.write(f.core.astype("<f8", copy=False).tobytes())
    return factor_byte_length(m, n, k, w)


def _read_exact(source, nbytes: int, offset: int, what: str) -> bytes:
    data = source.read(nbytes)
    if len(data) != nbytes:
        raise TruncatedPayloadError(
            f"truncated {what} at byte {offset}: expected {nbytes} bytes, "
            f"got {len(data)}"
        )
    return data


def read_factor(source) -> CompactSubspaceFactor:
    """Parse one factor record from a binary stream."""
    magic = _read_exact(source, len(MAGIC), 0, "magic")
    if magic != MAGIC:
        raise BadMagicError(f"bad magic {magic!r} at byte 0, expected {MAGIC!r}")
    header = _read_exact(source, _HEADER.size, len(MAGIC), "header")
    m, n, placement_value, k, w = _HEADER.unpack(header)
    if placement_value not in (0, 1):
        raise DimensionError(
            f"invalid placement {placement_value} at byte 12, expected 0 or 1"
        )
    placement = Placement(placement_value)
    if k + w != m:
        raise DimensionError(
            f"inconsistent header at byte 16: count {k} + bandwidth {w} != m {m}"
        )
    expected_k = n if placement is Placement.TOP else m - n
    if k != expected_k:
        raise DimensionError(
            f"inconsistent header at byte 16: {placement.name} placement with "
            f"m={m}, n={n} requires count {expected_k}, got {k}"
        )
    count = k + k * w + n * n
    payload = _read_exact(source, 8 * count, len(MAGIC) + _HEADER.size, "payload")
    doubles = np.frombuffer(payload, dtype="<f8").astype(np.float64)
    if doubles.size and not np.isfinite(doubles).all():
        raise FactorFormatError("payload contains non-finite values")
    betas = doubles[:k]
    free = doubles[k : k + k * w].reshape(k, w)
    core = doubles[k + k * w :].reshape(n, n)
    g = BandedReflectors(m, free, betas)
    return CompactSubspaceFactor(g, core, placement)


def write_matrix(a, dest) -> int:
    """Write a in text form to a path or text stream; returns byte count."""
    a = as_matrix(a)
    lines = [f"{a.shape[0]} {a.shape[1]}"]
    for row in a:
        lines.append(" ".join(format(x, ".17g") for x in row))
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="ascii") as fh:
            fh.write(text)
    return len(text.encode("ascii"))


def _parse_row(line: str, n: int, lineno: int) -> list[float]:
    tokens = line.split()
    if len(tokens) != n:
        raise MatrixFormatError(
            f"shape error at line {lineno}: expected {n} values, got {len(tokens)}"
        )
    values = []
    for tok in tokens:
        try:
            x = float(tok)
        except ValueError:
            raise MatrixFormatError(
                f"malformed number {tok!r} at line {lineno}"
            ) from None
        if not np.isfinite(x):
            raise MatrixFormatError(
                f"non-finite value {tok!r} at line {lineno}"
            )
        values.append(x)
    return values


def read_matrix(src) -> np.ndarray:
    """Read a matrix from a path or text stream in the text format."""
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src, "r", encoding="ascii") as fh:
            text = fh.read()
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise MatrixFormatError("empty file: missing 'm n' header at line 1")
    header = lines[0].split()
    if len(header) != 2:
        raise MatrixFormatError(
            f"malformed header at line 1: expected 'm n', got {lines[0]!r}"
        )
    try:
        m, n = int(header[0]), int(header[1])
    except ValueError:
        raise MatrixFormatError(
            f"malformed header at line 1: expected integers, got {lines[0]!r}"
        ) from None
    if m < 0 or n < 0:
        raise MatrixFormatError(f"negative dimensions at line 1: {m} x {n}")
    rows = []
    for i in range(m):
        blank = 1 + i >= len(lines) or (n > 0 and not lines[1 + i].strip())
        if blank:
            raise MatrixFormatError(
                f"row-count mismatch: expected {m} rows, data ends at line {1 + i}"
            )
        rows.append(_parse_row(lines[1 + i], n, 2 + i))
    for extra, line in enumerate(lines[1 + m :]):
        if line.strip():
            raise MatrixFormatError(
                f"row-count mismatch: unexpected data at line {2 + m + extra}"
            )
    out = np.array(rows, dtype=np.float64).reshape(m, n)
    return out
