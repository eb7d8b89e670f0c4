from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
from structlog import get_logger

from . import exceptions
from .runlog import RunLog

logger = get_logger()

METRIC_COLUMNS = ("gain_db", "power_w", "nf_db")
EVALUATION_COLUMNS = ("generation", "individual_id", "parent_id", "fitness", *METRIC_COLUMNS)
CONVERGENCE_COLUMNS = ("generation", "best_fom", *METRIC_COLUMNS)
COMPARE_COLUMNS = ("seed", "algorithm", "final_best", "evaluations")


def _cell(value: Any) -> Any:
    return "" if value is None else value


def _metrics(metrics) -> dict[str, Any]:
    if metrics is None:
        return {name: "" for name in METRIC_COLUMNS}
    return {name: getattr(metrics, name) for name in METRIC_COLUMNS}


def write_csv(path: Path, columns: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _cell(v) for k, v in row.items()})
    logger.info(f"Wrote {path}")


def write_runlog(log: RunLog, path: Path) -> None:
    """Write the complete run log as JSON"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(log.to_json() + "\n", encoding="utf-8")
    logger.info(f"Wrote {path}")


def load_runlog(path: str | Path) -> RunLog:
    """Read a run log written by :func:`write_runlog`

    Raises
    ------
    exceptions.InputFileNotFound
        Raised if the file is not found
    """
    fname = Path(path)
    if not fname.is_file():
        raise exceptions.InputFileNotFound(fname)
    try:
        return RunLog.from_json(fname.read_text(encoding="utf-8"))
    except (KeyError, TypeError, ValueError) as e:
        raise exceptions.InvalidConfiguration(f"Could not read run log {str(fname)!r}: {e}") from e


def write_evaluations(log: RunLog, path: Path) -> None:
    """One row per evaluation, with the free variables as trailing columns"""
    names = [p["name"] for p in log.space["parameters"]]
    position = {name: i for i, name in enumerate(names)}
    tied = set()
    for group in log.space.get("ties", []):
        leader = min(group, key=position.__getitem__)
        tied.update(name for name in group if name != leader)
    free_names = [name for name in names if name not in tied]

    rows = []
    for record in log.evaluations:
        ind = record.individual
        rows.append(
            {
                "generation": record.generation,
                "individual_id": ind.id,
                "parent_id": ind.parent_id,
                "fitness": ind.fitness,
                **_metrics(ind.metrics),
                **dict(zip(free_names, ind.values)),
            }
        )
    write_csv(path, [*EVALUATION_COLUMNS, *free_names], rows)


def write_convergence(log: RunLog, path: Path) -> None:
    """Champion fitness and metrics per generation"""
    rows = [
        {
            "generation": r.generation,
            "best_fom": r.champion.fitness,
            **_metrics(r.champion.metrics),
        }
        for r in log.records
    ]
    write_csv(path, CONVERGENCE_COLUMNS, rows)


def write_run(log: RunLog, outdir: Path) -> dict[str, Path]:
    """Write every artifact of a single run into `outdir`"""
    outdir = Path(outdir)
    paths = {
        "runlog": outdir / "runlog.json",
        "evaluations": outdir / "evaluations.csv",
        "convergence": outdir / "convergence.csv",
    }
    write_runlog(log, paths["runlog"])
    write_evaluations(log, paths["evaluations"])
    write_convergence(log, paths["convergence"])
    return paths


def summarize(rows: Sequence[Mapping[str, Any]]) -> dict[str, dict[str, float]]:
    """Median and interquartile range of ``final_best`` per algorithm"""
    summary = {}
    for algorithm in sorted({row["algorithm"] for row in rows}):
        values = np.array([row["final_best"] for row in rows if row["algorithm"] == algorithm])
        q1, median, q3 = np.percentile(values, [25, 50, 75])
        summary[algorithm] = {
            "runs": int(values.size),
            "median": float(median),
            "iqr": float(q3 - q1),
            "q1": float(q1),
            "q3": float(q3),
            "mean_evaluations": float(
                np.mean([row["evaluations"] for row in rows if row["algorithm"] == algorithm])
            ),
        }
    return summary


def write_compare(
    rows: Sequence[Mapping[str, Any]], outdir: Path
) -> tuple[dict[str, dict[str, float]], dict[str, Path]]:
    """Write ``compare.csv`` and its summary"""
    outdir = Path(outdir)
    paths = {
        "compare": outdir / "compare.csv",
        "summary": outdir / "compare_summary.json",
    }
    write_csv(paths["compare"], COMPARE_COLUMNS, rows)
    summary = summarize(rows)
    paths["summary"].write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote {paths['summary']}")
    return summary, paths
