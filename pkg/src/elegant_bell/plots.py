"""Figure rendering for the CLI report paths.

Figures are written next to the delimited outputs; everything uses the
Agg backend so the CLI stays headless.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from .scenario import QUANTUM_MAX


def render_bloch_figure(points, path: str) -> None:
    """Two Bloch spheres (Alice, Bob) with outcome eigenstates as labeled dots."""
    fig = plt.figure(figsize=(9, 4.5))
    for col, party, title in ((1, "A", "Alice"), (2, "B", "Bob")):
        ax = fig.add_subplot(1, 2, col, projection="3d")
        u = [i * math.pi / 12 for i in range(25)]
        v = [i * math.pi / 12 for i in range(13)]
        for phi in u:
            ax.plot(
                [math.cos(phi) * math.sin(t) for t in v],
                [math.sin(phi) * math.sin(t) for t in v],
                [math.cos(t) for t in v],
                color="lightgray",
                linewidth=0.4,
            )
        party_points = [p for p in points if p.label.startswith(party)]
        for p in party_points:
            x, y, z = p.vector
            color = "tab:blue" if p.label.endswith("+") else "tab:red"
            ax.scatter([x], [y], [z], color=color, s=35)
            ax.text(x * 1.12, y * 1.12, z * 1.12, p.label, fontsize=8)
        ax.set_title(title)
        ax.set_box_aspect((1, 1, 1))
        ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trace_figure(traces: dict[int, list[float]], path: str) -> None:
    """Seesaw value per sweep for each seed, with the quantum maximum marked."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for seed, values in traces.items():
        ax.plot(range(1, len(values) + 1), values, linewidth=0.9, label=f"seed {seed}")
    ax.axhline(QUANTUM_MAX, color="black", linestyle="--", linewidth=0.8)
    ax.set_xlabel("sweep")
    ax.set_ylabel("value")
    ax.set_title("seesaw convergence")
    if len(traces) <= 8:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
