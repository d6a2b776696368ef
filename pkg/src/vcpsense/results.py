"""Canonical result tables and CSV emission.

Every sweep writes rows of (sweep_name, sweep_value, metric, mean,
stderr, trials, seed).  Floats are written with shortest round-trip
formatting, so identical runs produce bit-identical files.
"""

import csv
import json
from dataclasses import dataclass, field
from typing import List

COLUMNS = ("sweep_name", "sweep_value", "metric", "mean", "stderr", "trials", "seed")


@dataclass
class ResultRow:
    sweep_name: str
    sweep_value: float
    metric: str
    mean: float
    stderr: float
    trials: int
    seed: int


@dataclass
class ResultTable:
    rows: List[ResultRow] = field(default_factory=list)

    def add(self, *args, **kwargs):
        self.rows.append(ResultRow(*args, **kwargs))

    def metrics(self):
        return sorted({r.metric for r in self.rows})


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def emit_csv(table: ResultTable, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(COLUMNS)
        for r in table.rows:
            w.writerow([r.sweep_name, _fmt(float(r.sweep_value)), r.metric,
                        _fmt(float(r.mean)), _fmt(float(r.stderr)),
                        r.trials, r.seed])


def load_csv(path) -> ResultTable:
    table = ResultTable()
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        for row in reader:
            table.add(row["sweep_name"], float(row["sweep_value"]), row["metric"],
                      float(row["mean"]), float(row["stderr"]),
                      int(row["trials"]), int(row["seed"]))
    return table


def write_manifest(manifest: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
