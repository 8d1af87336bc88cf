"""Part-attribute code matrices: parsing, validation, serialization and the
bundled benchmark datasets."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

__all__ = [
    "BUILTIN_IDS",
    "DatasetError",
    "PartCodeMatrix",
    "builtin_dataset",
    "load_matrix",
    "parse_matrix",
]

BUILTIN_IDS = ("P1", "P2", "P3", "P4", "P5")


class DatasetError(ValueError):
    """Raised for malformed or out-of-range part-code input."""


@dataclass(frozen=True)
class PartCodeMatrix:
    """An m x K matrix of coding digits, one row per part.

    ``codes`` is stored as a read-only ``int8`` array; build instances through
    the constructor (which validates) or :func:`parse_matrix`.
    """

    part_ids: tuple[str, ...]
    codes: np.ndarray
    attribute_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        codes = np.asarray(self.codes)
        if codes.ndim != 2:
            raise DatasetError(f"codes must be 2-D, got shape {codes.shape}")
        m, k = codes.shape
        if m < 2:
            raise DatasetError(f"need at least 2 parts, got m={m}")
        if k < 1:
            raise DatasetError("need at least 1 attribute")
        if not np.issubdtype(codes.dtype, np.integer):
            if not np.all(np.equal(np.mod(codes, 1), 0)):
                raise DatasetError("codes must be integers")
        bad = np.argwhere((codes < 0) | (codes > 9))
        if len(bad):
            r, c = bad[0]
            raise DatasetError(f"digit out of range at ({r + 1},{c + 1}): {codes[r, c]}")
        part_ids = tuple(str(p) for p in self.part_ids)
        if len(part_ids) != m:
            raise DatasetError(f"{len(part_ids)} part ids for {m} rows")
        seen = set()
        for i, pid in enumerate(part_ids):
            if pid in seen:
                raise DatasetError(f"duplicate part id {pid!r} at row {i + 1}")
            seen.add(pid)
        names = tuple(self.attribute_names) or tuple(f"a{j + 1}" for j in range(k))
        if len(names) != k:
            raise DatasetError(f"{len(names)} attribute names for {k} columns")
        frozen = codes.astype(np.int8)
        frozen.flags.writeable = False
        object.__setattr__(self, "codes", frozen)
        object.__setattr__(self, "part_ids", part_ids)
        object.__setattr__(self, "attribute_names", names)

    @property
    def m(self) -> int:
        return self.codes.shape[0]

    @property
    def K(self) -> int:
        return self.codes.shape[1]

    def __eq__(self, other):
        if not isinstance(other, PartCodeMatrix):
            return NotImplemented
        return (
            self.part_ids == other.part_ids
            and self.attribute_names == other.attribute_names
            and np.array_equal(self.codes, other.codes)
        )

    def __hash__(self):
        return hash((self.part_ids, self.attribute_names, self.codes.tobytes()))

    def head(self, n: int) -> PartCodeMatrix:
        return PartCodeMatrix(self.part_ids[:n], self.codes[:n], self.attribute_names)

    def to_csv(self) -> str:
        """Canonical CSV: header ``part,a1..aK`` then one labelled row per part."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["part", *self.attribute_names])
        for pid, row in zip(self.part_ids, self.codes):
            w.writerow([pid, *(int(v) for v in row)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "attributes": list(self.attribute_names),
            "parts": [
                {"id": pid, "code": [int(v) for v in row]}
                for pid, row in zip(self.part_ids, self.codes)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> PartCodeMatrix:
        data = json.loads(text)
        parts = data["parts"]
        rows = [p["code"] for p in parts]
        widths = {len(r) for r in rows}
        if len(widths) > 1:
            raise DatasetError("ragged code vectors in JSON input")
        return cls(
            tuple(p["id"] for p in parts),
            np.array(rows),
            tuple(data.get("attributes", ())),
        )


def _is_int(s: str) -> bool:
    s = s.strip()
    return s.lstrip("+-").isdigit()


def parse_matrix(
    text: str,
    delimiter: str | None = None,
    header: bool | None = None,
    labels: bool | None = None,
) -> PartCodeMatrix:
    """Parse delimited text into a validated :class:`PartCodeMatrix`.

    ``delimiter`` defaults to sniffing among comma, tab, semicolon and
    whitespace. ``header`` and ``labels`` (a leading part-id column) are
    auto-detected when left as ``None``: a first row with a name-like cell past
    its first column is a header, and a first column with any non-integer
    cell holds part ids.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise DatasetError("empty input")
    if delimiter is None:
        sample = lines[0]
        delimiter = next((d for d in (",", "\t", ";") if d in sample), None)
    if delimiter is None:
        rows = [ln.split() for ln in lines]
    else:
        rows = [[c.strip() for c in r] for r in csv.reader(lines, delimiter=delimiter)]

    if header is None:
        header = any(c == "" or c[0].isalpha() for c in rows[0][1:])
    names: tuple[str, ...] = ()
    if header:
        head, rows = rows[0], rows[1:]
    if not rows:
        raise DatasetError("no data rows")
    if labels is None:
        labels = not all(_is_int(r[0]) for r in rows)
        # a header with one more cell than the data implies an unnamed label column
        if header and not labels and len(head) == len(rows[0]) - 1:
            labels = True
    if header:
        names = tuple(head[1:] if labels and len(head) == len(rows[0]) else head)

    width = len(rows[0])
    ids, body = [], []
    for r, row in enumerate(rows):
        lineno = r + 1 + int(bool(header))
        if len(row) != width:
            raise DatasetError(f"ragged row at line {lineno}: {len(row)} cells, expected {width}")
        if labels:
            ids.append(row[0])
            row = row[1:]
        vals = []
        for c, cell in enumerate(row):
            col = c + 1
            if not _is_int(cell):
                raise DatasetError(f"non-integer cell {cell!r} at ({lineno},{col})")
            v = int(cell)
            if not 0 <= v <= 9:
                raise DatasetError(f"digit out of range at ({lineno},{col}): {v}")
            vals.append(v)
        body.append(vals)
    if not labels:
        ids = [f"p{i + 1}" for i in range(len(body))]
    if len(body) < 2:
        raise DatasetError(f"need at least 2 parts, got m={len(body)}")
    return PartCodeMatrix(tuple(ids), np.array(body, dtype=np.int64), names)


def load_matrix(path) -> PartCodeMatrix:
    """Read a CSV/TSV or JSON (``.json``) part-code file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if str(path).endswith(".json"):
        try:
            return PartCodeMatrix.from_json(text)
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise DatasetError(f"malformed JSON part file: {exc}") from exc
    return parse_matrix(text)


def builtin_dataset(name: str) -> PartCodeMatrix:
    """Return one of the five bundled benchmark problems (5x9 up to 27x9)."""
    key = name.upper()
    if key not in BUILTIN_IDS:
        raise DatasetError(f"unknown builtin dataset {name!r}; choose from {', '.join(BUILTIN_IDS)}")
    text = resources.files("partfam.data").joinpath(f"{key.lower()}.csv").read_text()
    return parse_matrix(text)
