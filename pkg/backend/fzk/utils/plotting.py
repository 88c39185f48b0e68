"""
Static SVG figures regenerated from the run's CSV files only.

Nothing here sees solver or verifier state: each function reads a CSV,
draws it, and writes an SVG next to it.
"""
from pathlib import Path
from typing import Optional, Sequence, Union
import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# Stable element ids and no timestamp so reruns produce identical SVG bytes
plt.rcParams["svg.hashsalt"] = "fzk"
plt.rcParams["font.size"] = 9
plt.rcParams["figure.figsize"] = [4.8, 3.2]

_SVG_METADATA = {"Date": None, "Creator": None}


def _finish(fig, ax, out_path: PathLike) -> Path:
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    out_path = Path(out_path)
    fig.savefig(out_path, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)
    logger.debug(f"Wrote {out_path}")
    return out_path


def plot_loglog(
    csv_path: PathLike,
    x: str,
    y: str,
    out_path: PathLike,
    group: Optional[str] = None,
    reduce: str = "max",
    title: Optional[str] = None,
) -> Path:
    """
    y against x on log-log axes; rows sharing x (and group) are reduced
    with ``reduce`` (e.g. the max over trials).
    """
    frame = pd.read_csv(csv_path)
    keys = [group, x] if group else [x]
    table = frame.groupby(keys, sort=True)[y].agg(reduce).reset_index()
    fig, ax = plt.subplots()
    if group:
        for label, part in table.groupby(group, sort=True):
            ax.plot(part[x], part[y], marker="o", label=f"{group}={label}")
        ax.legend(frameon=False)
    else:
        ax.plot(table[x], table[y], marker="o")
    positive = (table[x] > 0).all() and (table[y] > 0).all()
    if positive:
        ax.set_xscale("log", base=2)
        ax.set_yscale("log")
    ax.set_xlabel(x)
    ax.set_ylabel(f"{reduce} {y}")
    if title:
        ax.set_title(title)
    return _finish(fig, ax, out_path)


def plot_series(
    csv_path: PathLike,
    x: str,
    columns: Sequence[str],
    out_path: PathLike,
    relative: bool = False,
    title: Optional[str] = None,
) -> Path:
    """Columns against x; ``relative`` plots |q - q(0)| / |q(0)|"""
    frame = pd.read_csv(csv_path)
    fig, ax = plt.subplots()
    for column in columns:
        values = frame[column]
        if relative:
            base = abs(values.iloc[0]) or 1.0
            values = (values - values.iloc[0]).abs() / base
        ax.plot(frame[x], values, label=column)
    ax.set_xlabel(x)
    ax.set_ylabel("relative drift" if relative else ", ".join(columns))
    if len(columns) > 1:
        ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    return _finish(fig, ax, out_path)
