"""Binary persistence for value tables and summatory series.

File layout, all little-endian:

    offset  size  field
    0       4     magic "SUMF"
    4       4     format version, u32 (currently 1)
    8       1     kind tag (FunctionKind value, 0..4)
    9       1     payload tag: 0 = value table, 1 = summatory series
    10      8     lo, u64 (series store 1)
    18      8     hi, u64 (series store the limit)
    26      8     FNV-1a 64-bit checksum of the payload bytes
    34      ...   payload

Value-table payloads are the raw values, i8 for the ±1/0 kinds and f64 for
the Chebyshev kinds. Series payloads are (u64 n, i64 S) or (u64 n, f64 S)
pairs in ascending n. No compression; the bytes of a saved artifact are a
pure function of the artifact.

Loads re-check everything: magic, version, tags, checksum (integrity
errors, naming the offending field), then the reconstructed artifact's own
type invariants (corruption errors).
"""

from __future__ import annotations

import os
import struct
from pathlib import Path

import numpy as np

from .errors import CorruptionError, DomainError, IntegrityError
from .kernels import FunctionKind, ValueTable
from .series import SummatorySeries

MAGIC = b"SUMF"
VERSION = 1
HEADER = struct.Struct("<4sIBBQQQ")

PAYLOAD_VALUE_TABLE = 0
PAYLOAD_SERIES = 1

ENV_CACHE_DIR = "SUMMATORIA_CACHE"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
#: Payloads at or above this many bytes use the compiled hash when available.
_FAST_HASH_BYTES = 1 << 20

_fnv_fast = None
_fnv_fast_checked = False


def _fnv1a_py(data: bytes) -> int:
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return h


def _get_fnv_fast():
    """The numba-compiled hash loop, or None if numba is unavailable."""
    global _fnv_fast, _fnv_fast_checked
    if _fnv_fast_checked:
        return _fnv_fast
    _fnv_fast_checked = True
    try:
        from numba import njit
    except ImportError:
        return None

    @njit(cache=True)
    def _loop(arr):  # pragma: no cover - compiled
        h = np.uint64(_FNV_OFFSET)
        p = np.uint64(_FNV_PRIME)
        for i in range(arr.shape[0]):
            h = np.uint64(h ^ np.uint64(arr[i])) * p
        return h

    _fnv_fast = _loop
    return _fnv_fast


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash of a byte string.

    Byte-at-a-time in pure Python for small inputs; large inputs use a
    numba-compiled loop when numba is importable. Both paths compute the
    same function.
    """
    if len(data) >= _FAST_HASH_BYTES:
        fast = _get_fnv_fast()
        if fast is not None:
            return int(fast(np.frombuffer(data, dtype=np.uint8)))
    return _fnv1a_py(data)


def _payload_bytes(artifact) -> tuple[int, int, int, bytes]:
    """(kind_tag, payload_tag, (lo, hi), payload) for a supported artifact."""
    if isinstance(artifact, ValueTable):
        code = "<i1" if artifact.kind.is_integer_valued else "<f8"
        payload = artifact.values.astype(code, copy=False).tobytes()
        return artifact.kind.value, PAYLOAD_VALUE_TABLE, (artifact.lo, artifact.hi), payload
    if isinstance(artifact, SummatorySeries):
        s_code = "<i8" if artifact.kind.is_integer_valued else "<f8"
        pairs = np.empty(len(artifact.ns), dtype=[("n", "<u8"), ("s", s_code)])
        pairs["n"] = artifact.ns
        pairs["s"] = artifact.sums
        return artifact.kind.value, PAYLOAD_SERIES, (1, artifact.limit), pairs.tobytes()
    raise DomainError(f"cannot serialize a {type(artifact).__name__}")


def save(path, artifact: ValueTable | SummatorySeries) -> None:
    """Write one artifact to path in the header-plus-payload format."""
    kind_tag, payload_tag, (lo, hi), payload = _payload_bytes(artifact)
    header = HEADER.pack(MAGIC, VERSION, kind_tag, payload_tag, lo, hi, fnv1a64(payload))
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload)


def load(path) -> ValueTable | SummatorySeries:
    """Read an artifact back, re-validating structure and invariants.

    Raises:
        IntegrityError: short file, bad magic, unknown version or tag,
            or checksum mismatch; the message names the failing field.
        CorruptionError: bytes are structurally sound but the decoded
            artifact violates its own type invariants.
    """
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise IntegrityError(f"header: file is {len(raw)} bytes, need {HEADER.size}")
    magic, version, kind_tag, payload_tag, lo, hi, checksum = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise IntegrityError(f"magic: expected {MAGIC!r}, found {magic!r}")
    if version != VERSION:
        raise IntegrityError(f"version: expected {VERSION}, found {version}")
    try:
        kind = FunctionKind(kind_tag)
    except ValueError:
        raise IntegrityError(f"kind_tag: unknown value {kind_tag}") from None
    if payload_tag not in (PAYLOAD_VALUE_TABLE, PAYLOAD_SERIES):
        raise IntegrityError(f"payload_tag: unknown value {payload_tag}")
    payload = raw[HEADER.size :]
    actual = fnv1a64(payload)
    if actual != checksum:
        raise IntegrityError(f"checksum: header says {checksum:#018x}, payload hashes to {actual:#018x}")

    if payload_tag == PAYLOAD_VALUE_TABLE:
        code = "<i1" if kind.is_integer_valued else "<f8"
        values = np.frombuffer(payload, dtype=code)
        native = values.astype(np.int8 if kind.is_integer_valued else np.float64)
        try:
            table = ValueTable(kind, lo, hi, native)
        except DomainError as exc:
            raise CorruptionError(f"value table rejected: {exc}") from exc
        table.validate()
        return table

    s_code = "<i8" if kind.is_integer_valued else "<f8"
    pair = np.dtype([("n", "<u8"), ("s", s_code)])
    if len(payload) % pair.itemsize:
        raise CorruptionError(
            f"series payload of {len(payload)} bytes is not a whole number of checkpoints"
        )
    pairs = np.frombuffer(payload, dtype=pair)
    ns = pairs["n"].astype(np.int64)
    sums = pairs["s"].astype(np.int64 if kind.is_integer_valued else np.float64)
    try:
        return SummatorySeries(kind, hi, ns, sums)
    except DomainError as exc:
        raise CorruptionError(f"series rejected: {exc}") from exc


def default_cache_dir() -> Path:
    """SUMMATORIA_CACHE if set, else a per-user cache directory."""
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "summatoria"


def artifact_filename(artifact: ValueTable | SummatorySeries) -> str:
    """Canonical cache filename for an artifact."""
    if isinstance(artifact, ValueTable):
        return f"{artifact.kind.label}-table-{artifact.lo}-{artifact.hi}.sumf"
    if isinstance(artifact, SummatorySeries):
        return f"{artifact.kind.label}-series-1-{artifact.limit}.sumf"
    raise DomainError(f"cannot name a {type(artifact).__name__}")
