"""CSV output of metric logs."""
from __future__ import annotations

import csv
from pathlib import Path

from .experiment import Aggregate, aggregate
from .metrics import MetricsLog

RUN_HEADER = ["tick", "mean_q", "max_q", "departures", "weight_changes", "replication"]
AGGREGATE_HEADER = ["tick", "mean_q_avg", "mean_q_sd"]


def _num(x) -> str:
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return format(float(x), ".17g")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_csv(logs: list[MetricsLog], runs_path, aggregate_path) -> None:
    """Write per-replication rows and the cross-replication aggregate.

    Rows are ordered by replication, then tick.  Floats carry 17 significant
    digits so the files round-trip exactly.
    """
    logs = sorted(logs, key=lambda log: log.replication)
    with open(runs_path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(RUN_HEADER)
        for log in logs:
            for row in zip(log.tick, log.mean_q, log.max_q, log.departures, log.weight_changes):
                w.writerow([_num(v) for v in row] + [str(log.replication)])
    write_aggregate(aggregate(logs), aggregate_path)


def write_aggregate(agg: Aggregate, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = _writer(fh)
        w.writerow(AGGREGATE_HEADER)
        for row in zip(agg.tick, agg.mean, agg.sd):
            w.writerow([_num(v) for v in row])


def read_runs(path) -> list[MetricsLog]:
    """Rebuild the sampled part of the logs from a per-replication CSV."""
    by_rep: dict[int, MetricsLog] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RUN_HEADER:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for row in reader:
            rep = int(row["replication"])
            log = by_rep.setdefault(rep, MetricsLog(rep))
            log.tick.append(int(row["tick"]))
            log.mean_q.append(float(row["mean_q"]))
            log.max_q.append(int(row["max_q"]))
            log.departures.append(int(row["departures"]))
            log.weight_changes.append(int(row["weight_changes"]))
    return [by_rep[k] for k in sorted(by_rep)]


def read_aggregate(path) -> Aggregate:
    agg = Aggregate()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != AGGREGATE_HEADER:
            raise ValueError(f"{Path(path).name}: expected header {AGGREGATE_HEADER}")
        for row in reader:
            try:
                agg.tick.append(int(row["tick"]))
                agg.mean.append(float(row["mean_q_avg"]))
                agg.sd.append(float(row["mean_q_sd"]))
            except (TypeError, ValueError) as exc:
                raise ValueError(f"{Path(path).name}: malformed row {row}") from exc
    return agg
