"""Figure rendering for CLI reports.

Every subcommand that writes a sweep CSV also renders a PNG next to it;
the CSV stays the machine-readable contract, the figure is for eyeballing.
Matplotlib is imported lazily with the Agg backend so library users never
touch a display.
"""

from __future__ import annotations

from pathlib import Path


def _plt():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    plt.rcParams.update({
        "figure.figsize": (6.0, 4.0),
        "figure.dpi": 110,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "font.size": 9,
    })
    return plt


def line_plot(path: Path, x, series: dict, *, xlabel: str, ylabel: str,
              title: str, logx: bool = False, logy: bool = False) -> Path:
    """Line/marker plot; series maps label -> (y values, style string)."""
    plt = _plt()
    fig, ax = plt.subplots()
    for label, (y, style) in series.items():
        ax.plot(x, y, style, label=label)
    if logx:
        ax.set_xscale("log")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def bar_plot(path: Path, labels, values, *, xlabel: str, ylabel: str, title: str) -> Path:
    plt = _plt()
    fig, ax = plt.subplots()
    ax.bar(range(len(values)), values)
    step = max(1, len(labels) // 32)
    ax.set_xticks(range(0, len(labels), step))
    ax.set_xticklabels([str(l) for l in labels[::step]], rotation=0)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
