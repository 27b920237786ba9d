"""Batch rendering of the two sweep figures to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .evaluation import CostRow


def render_response_time(rows: list[tuple[int, float]], path: str) -> None:
    """Line plot of SU response time against the number of PUs."""
    ns = [n for n, _ in rows]
    elapsed = [t for _, t in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(ns, elapsed, marker="o")
    ax.set_xlabel("number of PUs")
    ax.set_ylabel("SU response time (time units)")
    ax.set_xticks(ns)
    ax.grid(True, alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_total_cost(rows: list[CostRow], path: str) -> None:
    """Bar chart of total price paid against the negotiation success rate."""
    rates = [row.success_rate for row in rows]
    costs = [row.total_cost for row in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(rates, costs, width=6.0)
    ax.set_xlabel("negotiation success rate (%)")
    ax.set_ylabel("total price paid by SU (DA)")
    ax.set_xticks(rates)
    ax.grid(True, axis="y", alpha=0.4)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
