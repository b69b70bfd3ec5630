"""Run reports with deterministic CSV/JSON emission.

Numeric formatting is pinned: every float is written in scientific
notation with 17 significant digits, so identical configurations produce
byte-identical files.  Complex quantities are stored as _re/_im column
pairs.  Bounds and the empirical values they certify always appear side
by side.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from . import __version__


def fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.16e}"
    if isinstance(value, int):
        return str(value)
    return str(value)


def flatten_row(row: dict) -> dict:
    """Split complex entries into _re/_im and coerce the rest to scalars."""
    out = {}
    for key, val in row.items():
        if isinstance(val, complex):
            out[key + "_re"] = float(val.real)
            out[key + "_im"] = float(val.imag)
        else:
            out[key] = val
    return out


@dataclass
class RunReport:
    rows: List[dict] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    plotdata: dict = field(default_factory=dict)  # name -> (header, rows)
    violations: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.metadata.setdefault("ringlab_version", __version__)

    def add_row(self, row: dict):
        self.rows.append(flatten_row(row))

    def add_violation(self, message: str):
        self.violations.append(message)

    @property
    def ok(self) -> bool:
        return not self.violations

    def columns(self) -> List[str]:
        cols: List[str] = []
        for row in self.rows:
            for key in row:
                if key not in cols:
                    cols.append(key)
        return cols

    def write(self, out_dir: str) -> dict:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = {}
        cols = self.columns()
        csv_path = out / "report.csv"
        with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(cols) + "\n")
            for row in self.rows:
                fh.write(",".join(fmt(row.get(c)) for c in cols) + "\n")
        paths["csv"] = str(csv_path)
        json_path = out / "report.json"
        doc = {
            "metadata": self.metadata,
            "rows": [{k: row.get(k) for k in cols} for row in self.rows],
            "violations": self.violations,
            "ok": self.ok,
        }
        with open(json_path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True, default=fmt)
            fh.write("\n")
        paths["json"] = str(json_path)
        if self.plotdata:
            pdir = out / "plotdata"
            pdir.mkdir(exist_ok=True)
            for name, (header, rows) in self.plotdata.items():
                ppath = pdir / f"{name}.csv"
                with open(ppath, "w", encoding="utf-8", newline="\n") as fh:
                    fh.write(",".join(header) + "\n")
                    for row in rows:
                        fh.write(",".join(fmt(v) for v in row) + "\n")
                paths[name] = str(ppath)
        return paths
