"""Matplotlib figure rendering for index and campaign reports.

Figures are written straight to files next to the delimited output; the
Agg backend keeps this headless-safe.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def render_eigenangle_traces(times, angles, out_path: str, *,
                             gauge_eps: float | None = None,
                             title: str = "relative unitary eigenangles") -> str:
    """Plot the eigenangle evolution that the winding count integrates."""
    times = np.asarray(times)
    angles = np.asarray(angles)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for j in range(angles.shape[1]):
        ax.plot(times, angles[:, j], lw=1.2, label=f"branch {j}")
    ax.axhline(0.0, color="k", lw=0.6, alpha=0.6)
    if gauge_eps:
        ax.axhline(gauge_eps, color="crimson", ls="--", lw=0.8,
                   label=f"gauge (+{gauge_eps:.2g})")
    ax.set_xlabel("t")
    ax.set_ylabel("eigenangle (rad)")
    ax.set_title(title)
    if angles.shape[1] <= 8:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path


def render_campaign_summary(report_dict: dict, out_path: str) -> str:
    """Bar chart of verdict counts per identity in a campaign report."""
    counts: dict[str, list[int]] = {}
    for v in report_dict.get("verdicts", []):
        ok, bad = counts.setdefault(v["identity"], [0, 0])
        if v["match"]:
            counts[v["identity"]][0] = ok + 1
        else:
            counts[v["identity"]][1] = bad + 1
    names = sorted(counts)
    passed = [counts[n][0] for n in names]
    failed = [counts[n][1] for n in names]
    fig, ax = plt.subplots(figsize=(8, 0.8 + 0.5 * max(1, len(names))))
    y = np.arange(len(names))
    ax.barh(y, passed, color="seagreen", label="pass")
    ax.barh(y, failed, left=passed, color="firebrick", label="fail")
    ax.set_yticks(y, names, fontsize=8)
    ax.set_xlabel("trials")
    ax.set_title(f"suite '{report_dict.get('suite', '?')}' "
                 f"({report_dict['aggregate']['passed']}/{report_dict['aggregate']['total']} pass)")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
    return out_path
