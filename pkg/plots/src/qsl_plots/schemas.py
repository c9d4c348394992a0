"""CSV schemas emitted by the qsl-dephasing CLI, one per figure input.

The header must match the emitting command exactly, in column order; a
trailing ``converged`` column (added by the CLI when some rows failed to
converge) is tolerated everywhere.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

DEPHASING = ["s", "temperature", "t", "D", "gamma", "F"]
STEADY = ["s", "temperature", "F_inf", "divergent"]
NONMARKOV = ["s", "temperature", "N", "n_intervals"]
QSL_TAU = ["s", "temperature", "tau", "geodesic", "path_length", "tau_qsl", "ratio"]
GEOSPEED = ["s", "temperature", "t", "geodesic_scaled", "speed_scaled"]
INTERPLAY = ["s", "temperature", "ratio"]

# Expected input schemas per figure; fig3 consumes two files.
FIGURE_INPUTS: dict[str, list[list[str]]] = {
    "fig1": [DEPHASING],
    "fig2": [DEPHASING],
    "fig3": [STEADY, NONMARKOV],
    "fig4": [QSL_TAU],
    "fig5": [GEOSPEED],
    "fig6": [INTERPLAY],
}


class SchemaError(Exception):
    """Header mismatch; the message carries the expected-vs-found diff."""


@dataclass(frozen=True)
class Table:
    columns: list[str]
    rows: list[list[str]]

    def column(self, name: str) -> list[str]:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def load_table(path: str, expected: list[str]) -> Table:
    """Read a CSV and validate its header against ``expected`` exactly."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file, expected header {expected}")
        rows = [row for row in reader if row]
    found = header
    if found[-1:] == ["converged"]:
        found = found[:-1]
    if found != expected:
        raise SchemaError(
            f"{path}: header mismatch\n"
            f"  expected: {','.join(expected)}\n"
            f"  found:    {','.join(header)}"
        )
    width = len(header)
    for i, row in enumerate(rows, start=2):
        if len(row) != width:
            raise SchemaError(f"{path}:{i}: expected {width} cells, found {len(row)}")
    return Table(columns=header, rows=rows)


def temperature_key(label: str) -> tuple[int, float]:
    """Stable sort key for temperature labels (zero < t:<v> < hight:<v>)."""
    if label == "zero":
        return (0, 0.0)
    if label.startswith("t:"):
        return (1, float(label[2:]))
    if label.startswith("hight:"):
        return (2, float(label[6:]))
    return (1, float(label))  # numeric column from the interplay mode
