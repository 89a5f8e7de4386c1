"""Cross-client range queries over an encrypted column.

A column holds basic ciphertexts of one client; a query is a ciphertext of
another client plus the comparison key for the pair, and the answer is the
set of rows whose plaintext is strictly less than the query's.

Three strategies:

* ``query_simple``: sequential ``compare_mc`` against every row.
* ``query_binsearch``: every row, but the differing bit is located by binary
  search over the bit positions.
* ``query_hybrid``: quickselect-style; one ``compare_mc`` per pivot, with the
  remaining rows partitioned around the pivot by the free same-client
  ``compare``.
"""

from __future__ import annotations

import csv
import io
import random
import struct
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .basic import (
    BasicCiphertext,
    BasicComparisonKey,
    CmpOutcome,
    IntegrityError,
    PublicParams,
    compare,
    compare_mc,
    direction,
    encrypt,
    gen_cmp_key,
    gen_key,
    orient,
    setup,
)
from .pairing import DeserializationError, PairingStats, pair

METHODS = ("simple", "binsearch", "hybrid")

COLUMN_MAGIC = b"MCDB"
COLUMN_VERSION = 1
_COLUMN_HEADER = struct.Struct(">4sBIHI")  # magic, version, owner, n, record count
_RECORD_HEADER = struct.Struct(">QI")  # row id, ciphertext length


class Row(NamedTuple):
    row_id: int
    ct: BasicCiphertext


class EncryptedColumn:
    """In-memory column of one client's ciphertexts, keyed by unique row ids."""

    def __init__(self, j: int, n: int, rows: Iterable[tuple[int, BasicCiphertext]] = ()):
        self.j = j
        self.n = n
        self.rows: list[Row] = []
        self._ids: set[int] = set()
        for row_id, ct in rows:
            self.add(row_id, ct)

    def __len__(self) -> int:
        return len(self.rows)

    def add(self, row_id: int, ct: BasicCiphertext) -> None:
        if ct.j != self.j or ct.n != self.n:
            raise ValueError(
                f"ciphertext of client {ct.j} with {ct.n} bits does not belong in column "
                f"(client {self.j}, {self.n} bits)"
            )
        if row_id in self._ids:
            raise ValueError(f"duplicate row id {row_id}")
        if not 0 <= row_id < 1 << 64:
            raise ValueError("row ids are unsigned 64-bit integers")
        self._ids.add(row_id)
        self.rows.append(Row(row_id, ct))

    def row_ids(self) -> set[int]:
        return set(self._ids)

    # persistence

    def to_bytes(self) -> bytes:
        out = [_COLUMN_HEADER.pack(COLUMN_MAGIC, COLUMN_VERSION, self.j, self.n, len(self.rows))]
        for row in self.rows:
            out.append(_record(row.row_id, row.ct))
        return b"".join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncryptedColumn":
        if len(data) < _COLUMN_HEADER.size:
            raise DeserializationError("truncated column header")
        magic, version, owner, n, count = _COLUMN_HEADER.unpack_from(data)
        if magic != COLUMN_MAGIC:
            raise DeserializationError("bad column magic")
        if version != COLUMN_VERSION:
            raise DeserializationError(f"unsupported column version {version}")
        col = cls(owner, n)
        pos = _COLUMN_HEADER.size
        for _ in range(count):
            if pos + _RECORD_HEADER.size > len(data):
                raise DeserializationError("truncated record header")
            row_id, length = _RECORD_HEADER.unpack_from(data, pos)
            pos += _RECORD_HEADER.size
            if pos + length > len(data):
                raise DeserializationError("truncated record")
            ct = BasicCiphertext.from_bytes(data[pos : pos + length])
            pos += length
            try:
                col.add(row_id, ct)
            except ValueError as exc:
                raise DeserializationError(str(exc)) from exc
        if pos != len(data):
            raise DeserializationError("trailing bytes after last record")
        return col

    def save(self, path) -> None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "EncryptedColumn":
        return cls.from_bytes(Path(path).read_bytes())

    @staticmethod
    def append_to_file(path, row_id: int, ct: BasicCiphertext) -> None:
        """Append one record to a column file, creating it if missing."""
        path = Path(path)
        if not path.exists():
            EncryptedColumn(ct.j, ct.n, [(row_id, ct)]).save(path)
            return
        col = EncryptedColumn.load(path)
        col.add(row_id, ct)  # validates owner, width, uniqueness
        with path.open("r+b") as fh:
            fh.seek(0, 2)
            fh.write(_record(row_id, ct))
            fh.seek(0)
            fh.write(_COLUMN_HEADER.pack(COLUMN_MAGIC, COLUMN_VERSION, col.j, col.n, len(col)))


def _record(row_id: int, ct: BasicCiphertext) -> bytes:
    blob = ct.to_bytes()
    return _RECORD_HEADER.pack(row_id, len(blob)) + blob


@dataclass
class QueryStats:
    compare_mc_calls: int = 0
    compare_calls: int = 0
    pairings: int = 0


@dataclass
class RangeQueryResult:
    row_ids: set[int]
    stats: QueryStats = field(default_factory=QueryStats)


def _check_query(col: EncryptedColumn, qct: BasicCiphertext, ck: BasicComparisonKey) -> None:
    orient(col.j, qct.j, ck)
    if qct.n != col.n:
        raise ValueError("query bit-length differs from column")


def compare_mc_binsearch(ct: BasicCiphertext, ct2: BasicCiphertext, ck: BasicComparisonKey,
                         pp: PublicParams | None = None,
                         stats: PairingStats | None = None, *, exact: bool = False) -> CmpOutcome:
    """``compare_mc`` with the differing bit located by binary search.

    The per-index test ``e(C_i0, K1) == e(C'_i0, K0)`` holds exactly below the
    differing bit, so bisection over positions finds it. For n = 32 this is
    always 5 probes of 2 pairings plus 2 more, 12 in total.

    When every probe matches, the last position was never probed and only the
    "less" relation is tested there. A negative answer cannot tell equality
    from "greater at the last bit", so ``msdb`` comes back as None in that one
    case. The order bit is always exact. ``exact=True`` spends up to 2 more
    pairings on that path to return the same outcome as ``compare_mc``.
    """
    ck = orient(ct.j, ct2.j, ck)
    if ct.n != ct2.n:
        raise ValueError("bit-length mismatch")
    k0, k1 = ck.k0, ck.k1
    probed = {}
    lo, hi = 0, ct.n - 1
    while lo < hi:
        mid = (lo + hi) // 2
        p = pair(ct.c0[mid], k1, stats)
        p2 = pair(ct2.c0[mid], k0, stats)
        probed[mid] = (p, p2)
        if p == p2:
            lo = mid + 1
        else:
            hi = mid
    if lo in probed:
        return direction(ct, ct2, lo, *probed[lo], k0, k1, stats)
    # only reached with lo == n - 1 and all earlier positions equal
    p2 = pair(ct2.c0[lo], k0, stats)
    if pair(ct.c1[lo], k1, stats) == p2:
        return CmpOutcome(1, lo + 1)
    if not exact:
        return CmpOutcome(0, None)
    p = pair(ct.c0[lo], k1, stats)
    if p == p2:
        return CmpOutcome(0, ct.n + 1)
    if pair(ct2.c1[lo], k0, stats) == p:
        return CmpOutcome(0, lo + 1)
    raise IntegrityError(f"no direction relation at index {lo + 1}")


def _query_each(col, qct, ck, pp, cmp_fn) -> RangeQueryResult:
    _check_query(col, qct, ck)
    ps = PairingStats()
    result = RangeQueryResult(set())
    for row in col.rows:
        if cmp_fn(row.ct, qct, ck, pp, ps).less:
            result.row_ids.add(row.row_id)
        result.stats.compare_mc_calls += 1
    result.stats.pairings = ps.pairings
    return result


def query_simple(col: EncryptedColumn, qct: BasicCiphertext, ck: BasicComparisonKey,
                 pp: PublicParams | None = None) -> RangeQueryResult:
    return _query_each(col, qct, ck, pp, compare_mc)


def query_binsearch(col: EncryptedColumn, qct: BasicCiphertext, ck: BasicComparisonKey,
                    pp: PublicParams | None = None) -> RangeQueryResult:
    return _query_each(col, qct, ck, pp, compare_mc_binsearch)


def query_hybrid(col: EncryptedColumn, qct: BasicCiphertext, ck: BasicComparisonKey,
                 pp: PublicParams | None = None, *, rng=None) -> RangeQueryResult:
    """Pivot on a uniformly random row of the undecided set each round."""
    _check_query(col, qct, ck)
    rng = rng or random.Random()
    ps = PairingStats()
    result = RangeQueryResult(set())
    undecided = list(col.rows)
    while undecided:
        pivot = undecided[rng.randrange(len(undecided))]
        below_query = compare_mc(pivot.ct, qct, ck, pp, ps).less
        result.stats.compare_mc_calls += 1
        lower, upper = [], []
        for row in undecided:
            if row is pivot:
                continue
            result.stats.compare_calls += 1
            (lower if compare(row.ct, pivot.ct).less else upper).append(row)
        if below_query:
            result.row_ids.update(r.row_id for r in lower)
            result.row_ids.add(pivot.row_id)
            undecided = upper
        else:
            undecided = lower
    result.stats.pairings = ps.pairings
    return result


def run_query(method: str, col, qct, ck, pp=None, *, rng=None) -> RangeQueryResult:
    if method == "simple":
        return query_simple(col, qct, ck, pp)
    if method == "binsearch":
        return query_binsearch(col, qct, ck, pp)
    if method == "hybrid":
        return query_hybrid(col, qct, ck, pp, rng=rng)
    raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")


# --- benchmark -------------------------------------------------------------------

BENCH_FIELDS = ("method", "R", "M", "trial", "wall_ms", "pairings", "compare_mc_calls", "compare_calls")


def bench(R: int, M: int = 100, methods: Iterable[str] = METHODS, iterations: int = 1, *,
          n: int = 32, rng=None) -> list[dict]:
    """Time every method on fresh random columns of M values drawn from [0, R).

    Each trial encrypts M column values under one client and a query value
    under a second client, then runs every requested method on the same data.
    """
    methods = tuple(methods)
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}")
    if not 1 <= R <= 1 << n:
        raise ValueError(f"range must be in [1, 2^{n}]")
    if M < 0 or iterations < 1:
        raise ValueError("size must be >= 0 and iterations >= 1")
    rng = rng or random.Random()
    mk, pp = setup(2, n, rng=rng)
    sk, sk2 = gen_key(1, mk, pp), gen_key(2, mk, pp)
    ck = gen_cmp_key(1, 2, mk, pp, rng=rng)
    rows = []
    for trial in range(iterations):
        values = [rng.randrange(R) for _ in range(M + 1)]
        col = EncryptedColumn(1, n, ((i, encrypt(v, sk, pp)) for i, v in enumerate(values[:M])))
        qct = encrypt(values[M], sk2, pp)
        for method in methods:
            t0 = time.perf_counter()
            res = run_query(method, col, qct, ck, pp, rng=rng)
            wall = (time.perf_counter() - t0) * 1000
            rows.append(dict(method=method, R=R, M=M, trial=trial, wall_ms=round(wall, 3),
                             **asdict(res.stats)))
    return rows


def bench_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: row[k] for k in BENCH_FIELDS})
    return buf.getvalue()
