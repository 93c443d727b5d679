"""The ``ptri 1`` text format, archives and closure checkpoints.

A document looks like::

    ptri 1
    dim 2
    classes 2
    simplex
    0 0
    0 1
    1 1
    simplex
    ...

Blocks list the canonical representatives in canonical class order. Parsing
and validation are separate: a parsed file may still fail ``validate``.
"""

from __future__ import annotations

import gzip
import os
import tempfile
from collections import deque
from pathlib import Path
from typing import Iterable, Iterator

from .tricore import DegenerateSimplexError, PeriodicTriangulation, canonical_simplex


class ParseError(ValueError):
    """Base class for malformed ``ptri`` input."""


class HeaderError(ParseError):
    pass


class VertexCountError(ParseError):
    pass


class DegenerateError(ParseError):
    pass


def serialize(t: PeriodicTriangulation) -> str:
    lines = ["ptri 1", f"dim {t.dim}", f"classes {len(t.classes)}"]
    for c in t.classes:
        lines.append("simplex")
        lines.extend(" ".join(str(x) for x in v) for v in c)
    return "\n".join(lines) + "\n"


def _header_value(line: str, word: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != word:
        raise HeaderError(f"line {lineno}: expected '{word} <int>', got {line!r}")
    try:
        value = int(parts[1])
    except ValueError:
        raise HeaderError(f"line {lineno}: {word} is not an integer") from None
    if value < 0:
        raise HeaderError(f"line {lineno}: negative {word}")
    return value


def _parse_one(lines: list, pos: int):
    """Parse the document starting at lines[pos]; return (triangulation, next position)."""
    def line(k):
        if k >= len(lines):
            raise HeaderError("unexpected end of input")
        return lines[k].strip()

    if line(pos) != "ptri 1":
        raise HeaderError(f"line {pos + 1}: expected 'ptri 1', got {line(pos)!r}")
    n = _header_value(line(pos + 1), "dim", pos + 2)
    m = _header_value(line(pos + 2), "classes", pos + 3)
    if n < 1:
        raise HeaderError("dimension must be positive")
    k = pos + 3
    classes = []
    for _ in range(m):
        if line(k) != "simplex":
            raise VertexCountError(f"line {k + 1}: expected 'simplex', got {line(k)!r}")
        k += 1
        verts = []
        while k < len(lines) and lines[k].strip() not in ("simplex", "ptri 1", "queue", ""):
            parts = lines[k].split()
            if len(parts) != n:
                raise VertexCountError(f"line {k + 1}: expected {n} coordinates, got {len(parts)}")
            try:
                verts.append(tuple(int(x) for x in parts))
            except ValueError:
                raise VertexCountError(f"line {k + 1}: non-integer coordinate") from None
            k += 1
        if len(verts) != n + 1:
            raise VertexCountError(f"simplex ending at line {k}: expected {n + 1} vertices, got {len(verts)}")
        try:
            classes.append(canonical_simplex(verts))
        except DegenerateSimplexError as e:
            raise DegenerateError(str(e)) from None
    if len(set(classes)) != len(classes):
        raise ParseError("duplicate translation classes")
    return PeriodicTriangulation(n, tuple(classes)), k


def parse(text: str) -> PeriodicTriangulation:
    lines = [ln for ln in text.splitlines()]
    while lines and not lines[-1].strip():
        lines.pop()
    t, k = _parse_one(lines, 0)
    if k != len(lines):
        raise ParseError(f"trailing content at line {k + 1}")
    return t


def parse_many(text: str) -> list:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    out = []
    k = 0
    while k < len(lines):
        t, k = _parse_one(lines, k)
        out.append(t)
    return out


def _open_text(path: Path, mode: str):
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, mode + "t", encoding="ascii")
    return open(path, mode, encoding="ascii")


def read_triangulation(path) -> PeriodicTriangulation:
    with _open_text(Path(path), "r") as fh:
        return parse(fh.read())


def atomic_write(path, text: str) -> None:
    """Write through a temporary file and rename, so readers never see half a file."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".")
    os.close(fd)
    try:
        with _open_text(Path(tmp + path.suffix) if path.suffix == ".gz" else Path(tmp), "w") as fh:
            fh.write(text)
        src = tmp + path.suffix if path.suffix == ".gz" else tmp
        os.replace(src, path)
    finally:
        for p in (tmp, tmp + path.suffix):
            if os.path.exists(p) and p != str(path):
                os.remove(p)


def write_triangulation(path, t: PeriodicTriangulation) -> None:
    atomic_write(path, serialize(t))


def read_archive(path) -> list:
    with _open_text(Path(path), "r") as fh:
        return parse_many(fh.read())


def write_archive(path, triangulations: Iterable) -> None:
    atomic_write(path, "".join(serialize(t) for t in triangulations))


# ---------------------------------------------------------------- checkpoints


def serialize_checkpoint(archive: list, queue: Iterable[int]) -> str:
    return "".join(serialize(t) for t in archive) + "queue\n" + "".join(f"{i}\n" for i in queue)


def parse_checkpoint(text: str):
    """Return (archive, queue) from checkpoint text."""
    head, sep, tail = text.partition("\nqueue\n")
    if not sep:
        if text.startswith("queue\n"):
            head, tail = "", text[len("queue\n"):]
        else:
            raise ParseError("checkpoint lacks the 'queue' separator")
    archive = parse_many(head)
    try:
        queue = [int(x) for x in tail.split()]
    except ValueError:
        raise ParseError("queue entries must be integers") from None
    if any(not 0 <= i < len(archive) for i in queue):
        raise ParseError("queue refers to a missing archive entry")
    return archive, deque(queue)


def read_checkpoint(path):
    with _open_text(Path(path), "r") as fh:
        return parse_checkpoint(fh.read())


def write_checkpoint(path, archive: list, queue: Iterable[int]) -> None:
    atomic_write(path, serialize_checkpoint(archive, queue))


def member_name(i: int) -> str:
    return f"tri_{i + 1:04d}.ptri"


def write_directory(directory, triangulations: list) -> list:
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for i, t in enumerate(triangulations):
        p = d / member_name(i)
        write_triangulation(p, t)
        paths.append(p)
    return paths


def read_directory(directory) -> Iterator:
    """(path, triangulation) for every *.ptri file, in name order."""
    for p in sorted(Path(directory).glob("*.ptri")):
        yield p, read_triangulation(p)
