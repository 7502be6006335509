"""Reading, validating, and writing expression matrices and sample class labels.

Expression files are delimited text (tab or comma, auto-detected from the
header row), laid out genes-as-rows:

    [corner]  sample_1  sample_2  ...  sample_m
    gene_1    w_11      w_12      ...  w_1m
    ...
    gene_n    w_n1      w_n2      ...  w_nm

The corner cell is optional; its presence is inferred from the width of the
body rows. Label files are two columns per line: ``sample_id <delim> class``.
Both UTF-8 with LF or CRLF line endings are accepted. Missing or non-numeric
cells are rejected rather than imputed, since every downstream computation
assumes complete data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DegenerateLabelsError, ParseError, ValidationError

__all__ = [
    "ExpressionMatrix",
    "ClassLabels",
    "parse_matrix",
    "parse_labels",
    "write_matrix",
]


def _sniff_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def _read_lines(source) -> list[str]:
    """Return the lines of a path or an open text stream, line endings stripped."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        with open(source, "r", encoding="utf-8", newline="") as fh:
            text = fh.read()
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    return lines


def _check_unique(ids, what: str):
    seen = set()
    for ident in ids:
        if ident in seen:
            raise ValidationError(f"duplicate {what} id {ident!r}")
        seen.add(ident)


@dataclass(frozen=True, eq=False)
class ExpressionMatrix:
    """An n-genes by m-samples matrix of real expression levels.

    Rows are genes, columns are samples; values may be negative and use
    arbitrary units. The value array is frozen after construction, so a
    matrix can be shared between any number of concurrent readers.
    """

    gene_ids: tuple[str, ...]
    sample_ids: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        gene_ids = tuple(str(g) for g in self.gene_ids)
        sample_ids = tuple(str(s) for s in self.sample_ids)
        values = np.array(self.values, dtype=float)
        if values.size == 0:
            values = values.reshape(len(gene_ids), len(sample_ids))
        if values.ndim != 2 or values.shape != (len(gene_ids), len(sample_ids)):
            raise ValidationError(
                f"value array of shape {values.shape} does not match "
                f"{len(gene_ids)} gene ids x {len(sample_ids)} sample ids"
            )
        _check_unique(gene_ids, "gene")
        _check_unique(sample_ids, "sample")
        if values.size and not np.isfinite(values).all():
            raise ValidationError("expression values must all be finite")
        values.flags.writeable = False
        object.__setattr__(self, "gene_ids", gene_ids)
        object.__setattr__(self, "sample_ids", sample_ids)
        object.__setattr__(self, "values", values)

    @property
    def n_genes(self) -> int:
        return len(self.gene_ids)

    @property
    def n_samples(self) -> int:
        return len(self.sample_ids)

    def row(self, i: int) -> np.ndarray:
        return self.values[i]


@dataclass(frozen=True, eq=False)
class ClassLabels:
    """Per-sample class tags tied to a companion matrix's sample order.

    ``labels`` maps every companion sample id to exactly one class tag;
    ``classes`` is the sorted tuple of distinct tags.
    """

    labels: dict[str, str]
    sample_ids: tuple[str, ...]
    classes: tuple[str, ...] = ()

    def __post_init__(self):
        labels = {str(k): str(v) for k, v in dict(self.labels).items()}
        sample_ids = tuple(str(s) for s in self.sample_ids)
        missing = [s for s in sample_ids if s not in labels]
        if missing:
            raise ValidationError(f"samples without a label: {missing[:5]}")
        extra = sorted(set(labels) - set(sample_ids))
        if extra:
            raise ValidationError(f"labels for unknown samples: {extra[:5]}")
        classes = tuple(sorted(set(labels.values())))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "sample_ids", sample_ids)
        object.__setattr__(self, "classes", classes)

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    def class_indices(self) -> np.ndarray:
        """Class tags encoded as integers, aligned with the companion sample order."""
        index = {c: i for i, c in enumerate(self.classes)}
        return np.array([index[self.labels[s]] for s in self.sample_ids], dtype=np.int64)


def parse_matrix(source, delimiter: str | None = None) -> ExpressionMatrix:
    """Parse a delimited expression file into an :class:`ExpressionMatrix`.

    ``source`` is a path or an open text stream. The delimiter is tab or
    comma, auto-detected from the header row unless given. Row and column
    numbers in errors are 1-based over body rows and data columns.
    """
    lines = _read_lines(source)
    if not lines:
        raise ParseError("empty input: expected a header row of sample ids")
    delim = delimiter or _sniff_delimiter(lines[0])
    header = [f.strip() for f in lines[0].split(delim)]
    body = lines[1:]

    if body:
        m = len(body[0].split(delim)) - 1
        if len(header) not in (m, m + 1):
            raise ParseError(
                f"header has {len(header)} fields but body rows carry {m} data columns",
                row=1,
            )
    else:
        m = len(header) - 1
    sample_ids = tuple(header[len(header) - m:]) if m > 0 else ()

    n = len(body)
    gene_ids = []
    values = np.empty((n, m), dtype=float)
    for r, line in enumerate(body, start=1):
        fields = line.split(delim)
        if len(fields) != m + 1:
            raise ParseError(
                f"row {r}: expected {m + 1} fields, found {len(fields)}", row=r
            )
        gene_ids.append(fields[0].strip())
        for c, cell in enumerate(fields[1:], start=1):
            cell = cell.strip()
            if not cell:
                raise DataError(f"row {r}, column {c}: missing value", row=r, column=c)
            try:
                v = float(cell)
            except ValueError:
                raise DataError(
                    f"row {r}, column {c}: non-numeric value {cell!r}",
                    row=r,
                    column=c,
                ) from None
            if not math.isfinite(v):
                raise DataError(
                    f"row {r}, column {c}: non-finite value {cell!r}", row=r, column=c
                )
            values[r - 1, c - 1] = v

    return ExpressionMatrix(tuple(gene_ids), sample_ids, values)


def parse_labels(source, matrix: ExpressionMatrix, delimiter: str | None = None) -> ClassLabels:
    """Parse a two-column sample/class file against a companion matrix.

    Every matrix sample must receive exactly one label, no label may name an
    unknown sample, and at least two distinct classes must be present.
    """
    lines = _read_lines(source)
    if not lines:
        raise ParseError("empty label file")
    delim = delimiter or _sniff_delimiter(lines[0])
    known = set(matrix.sample_ids)
    mapping: dict[str, str] = {}
    for r, line in enumerate(lines, start=1):
        fields = [f.strip() for f in line.split(delim)]
        if len(fields) != 2:
            raise ParseError(
                f"row {r}: expected 2 fields (sample id, class), found {len(fields)}",
                row=r,
            )
        sid, tag = fields
        if sid not in known:
            raise ValidationError(f"row {r}: unknown sample id {sid!r}")
        if sid in mapping:
            raise ValidationError(f"row {r}: duplicate label for sample {sid!r}")
        if not tag:
            raise DataError(f"row {r}: empty class tag", row=r, column=2)
        mapping[sid] = tag

    labels = ClassLabels(mapping, matrix.sample_ids)
    if labels.n_classes < 2:
        raise DegenerateLabelsError(
            f"need at least 2 distinct classes, found {list(labels.classes)}"
        )
    return labels


def write_matrix(matrix, dest, delimiter: str = "\t") -> None:
    """Write a matrix in the same delimited layout :func:`parse_matrix` reads.

    Values are formatted with shortest round-trip ``repr``, so a written file
    parses back bit-identically. Works for any object exposing ``gene_ids``,
    ``sample_ids``, and ``values`` (membership matrices included).
    """
    lines = [delimiter.join(("gene_id", *matrix.sample_ids))]
    for gid, row in zip(matrix.gene_ids, matrix.values):
        lines.append(delimiter.join((gid, *(repr(float(v)) for v in row))))
    text = "\n".join(lines) + "\n"
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
