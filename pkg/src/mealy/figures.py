"""Matplotlib rendering for the report subcommands.

Figures are written next to the delimited output, never shown interactively.
The Agg backend and fixed metadata keep the files byte-identical across runs.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SAVE_OPTS = {"dpi": 100, "metadata": {"Software": None}}


def _new_axes(title: str, xlabel: str, ylabel: str):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    return fig, ax


def _finish(fig, path: str) -> None:
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def save_ratio_plot(state_name: str, sizes, ratios, path: str) -> None:
    levels = range(1, len(sizes) + 1)
    fig, ax = _new_axes(f"components of {state_name}^n", "n", "|cc|")
    ax.semilogy(list(levels), list(sizes), "o-", label="|cc(q^n)|")
    twin = ax.twinx()
    twin.step(list(range(1, len(ratios) + 1)), list(ratios), where="post",
              color="tab:red", label="ratio")
    twin.set_ylabel("ratio")
    twin.set_ylim(bottom=0)
    _finish(fig, path)


def save_nq_plot(state_name: str, sizes, path: str) -> None:
    fig, ax = _new_axes(f"N_{state_name}(n)", "n", "|N(n)|")
    ax.semilogy(list(range(1, len(sizes) + 1)), list(sizes), "s-")
    _finish(fig, path)


def save_growth_plot(gamma, semigroup: bool, path: str) -> None:
    kind = "semigroup" if semigroup else "group"
    fig, ax = _new_axes(f"{kind} ball sizes", "n", "gamma(n)")
    ax.semilogy(list(range(1, len(gamma) + 1)), list(gamma), "o-")
    _finish(fig, path)


def save_witness_plot(state_name: str, mz_sizes, lo, hi, path: str) -> None:
    levels = list(range(1, len(mz_sizes) + 1))
    fig, ax = _new_axes(f"witness for {state_name}", "n", "#mz(cc(q^n))")
    ax.semilogy(levels, [float(b) for b in lo], "--", color="gray", label="lower")
    ax.semilogy(levels, [float(b) for b in hi], "--", color="black", label="upper")
    ax.semilogy(levels, list(mz_sizes), "o-", color="tab:blue", label="#mz")
    ax.legend()
    _finish(fig, path)
