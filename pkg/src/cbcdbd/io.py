"""Text formats: generating-vector files and CSV/JSON result tables.

Vector file::

    b m d
    g_1
    ...
    g_d
    # eta=poly:2
    # modulus=64

Components are integer polynomial encodings (least significant digit is the
constant coefficient).  Only ``#`` comment lines may follow the components;
``key=value`` comments are returned as metadata.
"""

from __future__ import annotations

import csv
import io as _io
import json
from typing import Iterable, Mapping, Sequence, TextIO

from .cbc_dbd import GeneratingVector
from .errors import CBCDBDError, ParseError
from .field_poly import Poly, is_prime

__all__ = ["format_float", "dump_vector", "load_vector", "write_table"]


def format_float(x: float) -> str:
    """17 significant digits, enough to round-trip any double."""
    return f"{x:.17g}"


def dump_vector(
    gv: GeneratingVector,
    comments: Mapping[str, str] | None = None,
    modulus: Poly | None = None,
) -> str:
    lines = [f"{gv.b} {gv.m} {gv.d}"]
    lines += [str(i) for i in gv.indices()]
    for key, val in (comments or {}).items():
        lines.append(f"# {key}={val}")
    if modulus is not None:
        lines.append(f"# modulus={modulus.index}")
    return "\n".join(lines) + "\n"


def _int(token: str, line: int) -> int:
    try:
        return int(token, 10)
    except ValueError:
        raise ParseError(f"expected a decimal integer, got {token!r}", position=f"line {line}") from None


def load_vector(text: str) -> tuple[GeneratingVector, dict[str, str], Poly | None]:
    """Parse a vector file; returns the vector, its comment metadata and the modulus if recorded."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise ParseError("empty vector file", position="line 1")
    head = lines[0].split()
    if len(head) != 3:
        raise ParseError("header must read 'b m d'", position="line 1")
    b, m, d = (_int(t, 1) for t in head)
    if not is_prime(b):
        raise ParseError(f"base {b} is not prime", position="line 1")
    if m < 1 or d < 1:
        raise ParseError("m and d must be positive", position="line 1")
    if len(lines) < d + 1:
        raise ParseError(f"expected {d} components, found {len(lines) - 1}", position=f"line {len(lines) + 1}")
    comps = []
    for i in range(1, d + 1):
        tok = lines[i].strip()
        if not tok or tok.startswith("#"):
            raise ParseError("missing component", position=f"line {i + 1}")
        g = _int(tok, i + 1)
        if not 0 <= g < b**m:
            raise ParseError(f"component {g} outside 0..b^m-1", position=f"line {i + 1}")
        if g % b == 0:
            raise ParseError("component has zero constant coefficient", position=f"line {i + 1}")
        comps.append(g)
    meta: dict[str, str] = {}
    meta_line: dict[str, int] = {}
    for i in range(d + 1, len(lines)):
        s = lines[i].strip()
        if not s:
            continue
        if not s.startswith("#"):
            raise ParseError("only '#' comment lines may follow the components", position=f"line {i + 1}")
        body = s[1:].strip()
        if "=" in body:
            k, v = body.split("=", 1)
            meta[k.strip()] = v.strip()
            meta_line[k.strip()] = i + 1
    modulus = None
    if "modulus" in meta:
        where = meta_line["modulus"]
        p = _int(meta["modulus"], where)
        modulus = Poly(b, p)
        if modulus.degree != m:
            raise ParseError(f"modulus {p} does not have degree {m}", position=f"line {where}")
    try:
        gv = GeneratingVector.from_indices(b, m, comps)
    except CBCDBDError as exc:
        raise ParseError(str(exc)) from exc
    return gv, meta, modulus


def write_table(
    rows: Iterable[Sequence],
    header: Sequence[str],
    fmt: str = "csv",
    stream: TextIO | None = None,
) -> str:
    """Render rows as CSV (header line first) or a JSON array of records.

    Floats are written with ``format_float`` in both formats; the text is
    returned and also written to ``stream`` when given.
    """
    rows = [list(r) for r in rows]
    if fmt == "csv":
        buf = _io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(header)
        for r in rows:
            wr.writerow([format_float(x) if isinstance(x, float) else x for x in r])
        text = buf.getvalue()
    elif fmt == "json":
        recs = [
            "{" + ", ".join(
                f"{json.dumps(k)}: {format_float(v) if isinstance(v, float) else json.dumps(v)}"
                for k, v in zip(header, r)
            ) + "}"
            for r in rows
        ]
        text = "[\n" + ",\n".join("  " + s for s in recs) + "\n]\n" if recs else "[]\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if stream is not None:
        stream.write(text)
    return text
