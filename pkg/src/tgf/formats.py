"""File formats: table CSV, moments files, bounds/curve CSV, checkpoints.

Stable on-disk contracts:

  table CSV      header `n,h2norm,xi,eta,zeta,m`, one row per n >= 1,
                 decimal integers (no exponents).
  moments file   lines `n m_n`, whitespace separated, `#` comments; must
                 start at n = 0 or n = 1 (m_0 = 1 is implied).
  bounds CSV     header `n,root_moment,ratio_root,lambda_max,alpha,alpha_sum`,
                 5 decimal places; a `-full` companion carries 30
                 significant digits.
  curve CSV      header `t,rho`, 6 decimal places, optional `# label` line.
  checkpoint     magic `TGFL`, then little-endian: version u32 (= 1),
                 level u32, q u32, entry count u64, then per entry:
                 key length u16, key bytes, sign u8 (0 positive),
                 magnitude length u32, magnitude bytes (big endian),
                 sorted by key.
"""
from __future__ import annotations

import csv
import io
import struct
from importlib import resources
from pathlib import Path
from typing import Optional

import mpmath

from .errors import UsageError
from .ladder import MultiplicityVector
from .sequences import SequenceTable

CHECKPOINT_MAGIC = b"TGFL"
CHECKPOINT_VERSION = 1


# -- table CSV ---------------------------------------------------------------

TABLE_HEADER = ["n", "h2norm", "xi", "eta", "zeta", "m"]


def table_csv_text(table: SequenceTable) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    for n in range(1, table.max_n + 1):
        writer.writerow([n, *table.row(n)])
    return out.getvalue()


def write_table_csv(path, table: SequenceTable) -> None:
    Path(path).write_text(table_csv_text(table), encoding="ascii")


def read_table_csv(path_or_text) -> SequenceTable:
    if isinstance(path_or_text, str) and "\n" in path_or_text:
        text = path_or_text
    else:
        text = Path(path_or_text).read_text(encoding="ascii")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != TABLE_HEADER:
        raise UsageError("not a table CSV (bad header)")
    cols: dict[int, tuple[int, ...]] = {}
    for row in rows[1:]:
        if not row:
            continue
        n, *values = (int(x) for x in row)
        cols[n] = tuple(values)
    max_n = max(cols)
    if sorted(cols) != list(range(1, max_n + 1)):
        raise UsageError("table CSV must cover n = 1..max contiguously")
    q = cols[1][4] - 1
    return SequenceTable(
        q=q,
        h2norm=[cols[n][0] for n in range(1, max_n + 1)],
        xi=[cols[n][1] for n in range(1, max_n + 1)],
        eta=[cols[n][2] for n in range(1, max_n + 1)],
        zeta=[cols[n][3] for n in range(1, max_n + 1)],
        m=[cols[n][4] for n in range(1, max_n + 1)],
    )


# -- moments files -----------------------------------------------------------

def parse_moments_text(text: str) -> list[int]:
    """Parse `n m_n` lines into the list m_0..m_N (m_0 = 1 implied)."""
    pairs = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise UsageError(f"bad moments line: {raw!r}")
        pairs.append((int(parts[0]), int(parts[1])))
    if not pairs:
        raise UsageError("moments file is empty")
    pairs.sort()
    start = pairs[0][0]
    if start not in (0, 1):
        raise UsageError("moments must start at n = 0 or n = 1")
    if [n for n, _ in pairs] != list(range(start, start + len(pairs))):
        raise UsageError("moments file has gaps")
    moments = [m for _, m in pairs]
    if start == 1:
        moments = [1] + moments
    elif moments[0] != 1:
        raise UsageError("m_0 must equal 1")
    return moments


def read_moments(path) -> tuple[int, list[int]]:
    """Read a moments file or a table CSV; returns (q, [m_0..m_N])."""
    text = Path(path).read_text(encoding="ascii")
    first = text.lstrip().splitlines()[0] if text.strip() else ""
    if first.replace(" ", "").startswith("n,"):
        table = read_table_csv(text)
        return table.q, table.moments()
    moments = parse_moments_text(text)
    if len(moments) < 2:
        raise UsageError("need at least m_1 to infer q")
    return moments[1] - 1, moments


# -- bounds CSV --------------------------------------------------------------

BOUNDS_HEADER = ["n", "root_moment", "ratio_root", "lambda_max", "alpha", "alpha_sum"]


def bounds_csv_text(rows, full_precision: bool = False) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BOUNDS_HEADER)
    for row in rows:
        if full_precision:
            fmt = lambda v: mpmath.nstr(v, 30, strip_zeros=False)
        else:
            fmt = lambda v: "%.5f" % float(v)
        writer.writerow(
            [
                row.n,
                fmt(row.root_moment),
                fmt(row.ratio_root),
                fmt(row.lambda_max),
                fmt(row.alpha),
                fmt(row.alpha_sum) if row.alpha_sum is not None else "",
            ]
        )
    return out.getvalue()


def write_bounds_csv(path, rows) -> Path:
    """Write the 5-decimal bounds CSV and a `-full` companion; returns the
    companion path."""
    path = Path(path)
    path.write_text(bounds_csv_text(rows), encoding="ascii")
    companion = path.with_name(path.stem + "-full" + path.suffix)
    companion.write_text(bounds_csv_text(rows, full_precision=True), encoding="ascii")
    return companion


def read_bounds_csv(path_or_text) -> list[dict]:
    if isinstance(path_or_text, str) and "\n" in path_or_text:
        text = path_or_text
    else:
        text = Path(path_or_text).read_text(encoding="ascii")
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != BOUNDS_HEADER:
        raise UsageError("not a bounds CSV")
    out = []
    for row in rows[1:]:
        if not row:
            continue
        out.append(
            {
                "n": int(row[0]),
                "root_moment": float(row[1]),
                "ratio_root": float(row[2]),
                "lambda_max": float(row[3]),
                "alpha": float(row[4]),
                "alpha_sum": float(row[5]) if row[5] else None,
            }
        )
    return out


# -- curve CSV ---------------------------------------------------------------

def curve_csv_text(curve) -> str:
    out = io.StringIO()
    if curve.label:
        out.write(f"# {curve.label}\n")
    out.write("t,rho\n")
    for t, rho in zip(curve.grid, curve.values):
        out.write("%.6f,%.6f\n" % (t, rho))
    return out.getvalue()


def write_curve_csv(path, curve) -> None:
    Path(path).write_text(curve_csv_text(curve), encoding="ascii")


# -- ladder checkpoints ------------------------------------------------------

def checkpoint_path(directory: Path, n: int) -> Path:
    return Path(directory) / f"level_{n:04d}.tgfl"


def write_checkpoint(directory: Path, q: int, vec: MultiplicityVector) -> Path:
    path = checkpoint_path(directory, vec.n)
    buf = bytearray()
    buf += CHECKPOINT_MAGIC
    buf += struct.pack("<III", CHECKPOINT_VERSION, vec.n, q)
    buf += struct.pack("<Q", len(vec.entries))
    for key in sorted(vec.entries):
        coeff = vec.entries[key]
        sign = 0 if coeff >= 0 else 1
        mag = abs(coeff)
        mag_bytes = mag.to_bytes((mag.bit_length() + 7) // 8 or 1, "big")
        buf += struct.pack("<H", len(key))
        buf += key
        buf += struct.pack("<BI", sign, len(mag_bytes))
        buf += mag_bytes
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(bytes(buf))
    tmp.replace(path)
    return path


def read_checkpoint(path) -> tuple[int, MultiplicityVector]:
    """Returns (q, vector)."""
    data = Path(path).read_bytes()
    if data[:4] != CHECKPOINT_MAGIC:
        raise UsageError(f"{path}: not a ladder checkpoint")
    version, n, q = struct.unpack_from("<III", data, 4)
    if version != CHECKPOINT_VERSION:
        raise UsageError(f"{path}: unsupported checkpoint version {version}")
    (count,) = struct.unpack_from("<Q", data, 16)
    entries: dict[bytes, int] = {}
    offset = 24
    for _ in range(count):
        (key_len,) = struct.unpack_from("<H", data, offset)
        offset += 2
        key = data[offset : offset + key_len]
        offset += key_len
        sign, mag_len = struct.unpack_from("<BI", data, offset)
        offset += 5
        mag = int.from_bytes(data[offset : offset + mag_len], "big")
        offset += mag_len
        entries[key] = -mag if sign else mag
    return q, MultiplicityVector(n, entries)


def latest_checkpoint_pair(
    directory: Path, q: int, max_n: int
) -> Optional[tuple[MultiplicityVector, MultiplicityVector]]:
    """Newest consecutive pair of levels <= max_n usable as a ladder seed."""
    directory = Path(directory)
    levels = {}
    for path in directory.glob("level_*.tgfl"):
        try:
            level = int(path.stem.split("_")[1])
        except (IndexError, ValueError):
            continue
        if level <= max_n:
            levels[level] = path
    for n in sorted(levels, reverse=True):
        if n - 1 in levels:
            q1, prev = read_checkpoint(levels[n - 1])
            q2, cur = read_checkpoint(levels[n])
            if q1 == q == q2:
                return prev, cur
    return None


# -- packaged fixtures -------------------------------------------------------

def fixture_text(name: str) -> str:
    return (resources.files("tgf") / "fixtures" / name).read_text(encoding="ascii")


def load_fixture_table(case: int) -> SequenceTable:
    """The published exact sequences: case 1 reaches n = 37, case 2 n = 24."""
    if case not in (1, 2):
        raise UsageError("fixture tables exist for cases 1 and 2")
    return read_table_csv(fixture_text(f"table{case}.csv"))


def load_fixture_bounds(case: int) -> list[dict]:
    """The published 5-decimal norm-bound tables for cases 1 and 2."""
    if case not in (1, 2):
        raise UsageError("fixture bounds exist for cases 1 and 2")
    return read_bounds_csv(fixture_text(f"bounds{case}.csv"))
