"""CDF figure rendering from exported campaign CSVs.

Pure presentation: reads `se,cdf` series written by the campaign runner and
plots them without any resampling or smoothing, so the plotted arrays are
exactly the file contents.
"""

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import csv

import matplotlib.pyplot as plt
import numpy as np

DEFAULT_XLABEL = "Spectral efficiency [bit/s/Hz]"
DEFAULT_YLABEL = "CDF"


@dataclass
class PlotSpec:
    """One figure: labeled input CSVs, axis labels, and the output path."""

    csv_paths: list
    labels: list
    output: str
    xlabel: str = DEFAULT_XLABEL
    ylabel: str = DEFAULT_YLABEL
    title: str = ""

    def __post_init__(self):
        self.csv_paths = [Path(p) for p in self.csv_paths]
        if len(self.csv_paths) != len(self.labels):
            raise ValueError(
                f"{len(self.csv_paths)} CSV paths but {len(self.labels)} labels")
        if not self.csv_paths:
            raise ValueError("at least one series is required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"series labels must be unique, got {self.labels}")
        for path in self.csv_paths:
            if not path.exists():
                raise FileNotFoundError(f"series CSV not found: {path}")

    @classmethod
    def from_dict(cls, data):
        series = data.get("series")
        if not isinstance(series, list) or not series:
            raise ValueError("spec must contain a non-empty 'series' list")
        paths, labels = [], []
        for entry in series:
            if "path" not in entry or "label" not in entry:
                raise ValueError(f"series entries need 'path' and 'label': {entry}")
            paths.append(entry["path"])
            labels.append(entry["label"])
        if "output" not in data:
            raise ValueError("spec must name an 'output' image path")
        return cls(csv_paths=paths, labels=labels, output=data["output"],
                   xlabel=data.get("xlabel", DEFAULT_XLABEL),
                   ylabel=data.get("ylabel", DEFAULT_YLABEL),
                   title=data.get("title", ""))


def load_series(path):
    """(se, cdf) arrays from one runner CSV, exactly as stored."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"series CSV not found: {path}")
    se, cdf = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["se", "cdf"]:
            raise ValueError(f"{path}: expected header 'se,cdf', got {header}")
        for i, row in enumerate(reader, start=2):
            try:
                se.append(float(row[0]))
                cdf.append(float(row[1]))
            except (IndexError, ValueError):
                raise ValueError(f"{path}:{i}: malformed row {row!r}") from None
    if not se:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(se), np.asarray(cdf)


def build_cdf_figure(spec):
    """Matplotlib figure with one curve per series; caller owns/closes it.

    The plotted arrays are the CSV contents verbatim (no resampling or
    smoothing), so line data equals what load_series returns.
    """
    series = [load_series(p) for p in spec.csv_paths]
    fig, ax = plt.subplots(figsize=(6.4, 4.4))
    for (se, cdf), label in zip(series, spec.labels):
        ax.plot(se, cdf, label=label, linewidth=1.6)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    if spec.title:
        ax.set_title(spec.title)
    ax.set_ylim(0.0, 1.0)
    ax.grid(True, alpha=0.4)
    ax.legend(loc="lower right", fontsize=9)
    return fig


def render_cdf_figure(spec):
    """Render one CDF figure per the spec and return the output path.

    Vector formats (the default .pdf, or .svg) are recommended for
    publication-quality output.
    """
    fig = build_cdf_figure(spec)
    try:
        output = Path(spec.output)
        if str(output.parent) not in ("", "."):
            output.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(output, bbox_inches="tight")
    finally:
        plt.close(fig)
    return Path(spec.output)
