"""Campaign reports and machine-readable output.

Reports are JSON (primary) plus delimited CSV traces of the eigenangle
evolution for plotting; both carry a schema_version.  A report is
reproducible byte-for-byte from (config, master_seed) apart from the
elapsed-time field.
"""
from __future__ import annotations

import csv
import json
import platform
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .maslov import CONVENTION
from .verify import VerdictReport, run_trial, trial_seed

SCHEMA_VERSION = 1


@dataclass
class CampaignReport:
    suite: str
    trials: int
    master_seed: int
    verdicts: list[VerdictReport] = field(default_factory=list)
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> int:
        return sum(1 for v in self.verdicts if v.match)

    @property
    def failed(self) -> int:
        return len(self.verdicts) - self.passed

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "campaign",
            "suite": self.suite,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "convention": CONVENTION,
            "aggregate": {"passed": self.passed, "failed": self.failed,
                          "total": len(self.verdicts)},
            "environment": {
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "platform": platform.platform(),
            },
            "elapsed_seconds": self.elapsed_seconds,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def run_campaign(suite: str, trials: int, master_seed: int, *,
                 n_max: int = 3, k_max: int = 6,
                 threads: int = 1) -> CampaignReport:
    """Run `trials` seeded instances of a suite; order-independent fold."""
    t0 = time.time()
    seeds = [trial_seed(master_seed, i) for i in range(trials)]
    results: dict[int, list[VerdictReport]] = {}
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = {pool.submit(run_trial, suite, s, n_max=n_max, k_max=k_max): i
                       for i, s in enumerate(seeds)}
            for fut, i in futures.items():
                results[i] = fut.result()
    else:
        for i, s in enumerate(seeds):
            results[i] = run_trial(suite, s, n_max=n_max, k_max=k_max)
    verdicts = [v for i in sorted(results) for v in results[i]]
    return CampaignReport(suite=suite, trials=trials, master_seed=master_seed,
                          verdicts=verdicts, elapsed_seconds=time.time() - t0)


def dump_json(payload: dict, path: str | None) -> str:
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj)}")


def write_trace_csv(path: str, times: np.ndarray, angles: np.ndarray) -> None:
    """Delimited eigenangle traces: one row per sample time."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t"] + [f"angle_{j}" for j in range(angles.shape[1])])
        for t, row in zip(times, angles):
            writer.writerow([f"{t:.12g}"] + [f"{a:.12g}" for a in row])
