"""Tabular output of experiment results as CSV or JSON files."""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from mcentrality.dtos import (AttackReport, CentralityVector, CorrelationRecord,
                              EntropyWeights, GraphStats, MCentralityVector,
                              MethodComparison, OutputFormat, RankingList)
from mcentrality.graph import Graph

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 6


@dataclass
class Table:
    command: str
    frame: pd.DataFrame
    method: Optional[str] = None
    label_column: Optional[str] = None

    @property
    def columns(self) -> list[str]:
        return [str(c) for c in self.frame.columns]

    def __len__(self) -> int:
        return len(self.frame)


def float_format(precision: Optional[int] = None) -> str:
    if precision is None:
        return f"%.{SIGNIFICANT_DIGITS}g"
    return f"%.{precision}f"


def format_number(value: float, precision: Optional[int] = None) -> str:
    return float_format(precision) % value


def _rounded(frame: pd.DataFrame, precision: Optional[int]) -> pd.DataFrame:
    out = frame.copy()
    for col in out.select_dtypes(include="floating").columns:
        if precision is None:
            out[col] = out[col].map(lambda v: float(format_number(v)) if pd.notna(v) else v)
        else:
            out[col] = out[col].round(precision)
    return out


def render(table: Table, fmt: OutputFormat, precision: Optional[int] = None) -> str:
    frame = table.frame
    if OutputFormat(fmt) is OutputFormat.JSON:
        records = json.loads(
            _rounded(frame, precision).to_json(orient="records", double_precision=15)
        )
        payload = {"command": table.command, "method": table.method, "records": records}
        return json.dumps(payload, indent=2) + "\n"
    frame = frame.copy()
    for col in frame.select_dtypes(include="bool").columns:
        frame[col] = frame[col].map({True: "true", False: "false"})
    return frame.to_csv(
        index=False, float_format=float_format(precision), na_rep="nan", lineterminator="\n"
    )


def output_path(
    out_dir: str, input_path: str, table: Table, fmt: OutputFormat
) -> str:
    stem = os.path.splitext(os.path.basename(input_path))[0] or "graph"
    parts = [stem, table.command.replace("-", "_")]
    if table.method:
        parts.append(table.method)
    return os.path.join(out_dir, "_".join(parts) + "." + OutputFormat(fmt).value)


def write_table(
    table: Table,
    out_dir: str,
    input_path: str,
    fmt: OutputFormat = OutputFormat.CSV,
    precision: Optional[int] = None,
) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = output_path(out_dir, input_path, table, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render(table, fmt, precision))
    logger.info("Wrote %d rows to %s", len(table), path)
    return path


def stats_table(s: GraphStats) -> Table:
    frame = pd.DataFrame(
        [
            {
                "n": s.n,
                "m": s.m,
                "mean_degree": s.mean_degree,
                "max_degree": s.max_degree,
                "mean_degree_sq": s.mean_degree_sq,
                "max_coreness": s.max_coreness,
                "giant_size": s.giant_size,
                "beta_th": float(s.beta_th),
                "threshold_formula": s.threshold_formula.value,
            }
        ]
    )
    return Table("stats", frame)


def ranking_table(
    g: Graph,
    vec: CentralityVector,
    ranking: RankingList,
    top: Optional[int] = None,
    parts: Optional[MCentralityVector] = None,
) -> Table:
    """Ranked rows; M-Centrality also reports its coreness and degree variation."""
    order = ranking.order if top is None else ranking.order[:top]
    frame = pd.DataFrame({"label": np.asarray(g.labels, dtype=object)[order]})
    if parts is not None:
        frame["ks"] = parts.coreness[order].astype(np.int64)
        frame["delta_d"] = parts.delta_d[order].astype(np.float64)
        frame["m_score"] = vec.scores[order].astype(np.float64)
    else:
        frame["score"] = vec.scores[order].astype(np.float64)
    frame["rank"] = ranking.ranks[order].astype(np.int64)
    return Table("rank", frame, method=vec.method, label_column="label")


def weights_table(w: EntropyWeights) -> Table:
    frame = pd.DataFrame(
        [
            {
                "mu": w.mu,
                "entropy_global": w.entropy_global,
                "entropy_local": w.entropy_local,
                "degenerate": ";".join(w.degenerate),
            }
        ]
    )
    return Table("weights", frame)


def mu_sweep_table(g: Graph, mus: Sequence[float], orders: Sequence[Sequence[int]]) -> Table:
    depth = max((len(o) for o in orders), default=0)
    frame = pd.DataFrame({"rank": np.arange(1, depth + 1, dtype=np.int64)})
    for mu, order in zip(mus, orders):
        labels = [g.labels[i] for i in order]
        frame[f"mu={format_number(float(mu))}"] = labels + [""] * (depth - len(labels))
    return Table("mu-sweep", frame, method="m")


def attack_table(report: AttackReport, method: str) -> Table:
    frame = pd.DataFrame(
        [
            {
                "step": s.step,
                "removed_label": s.removed_label or "",
                "components": s.components,
                "eta": float(s.eta),
                "nu": float(s.nu),
                "giant": s.giant,
            }
            for s in report.steps
        ],
        columns=["step", "removed_label", "components", "eta", "nu", "giant"],
    )
    return Table("attack", frame, method=method, label_column="removed_label")


def sir_table(records: Sequence[CorrelationRecord]) -> Table:
    frame = pd.DataFrame(
        [(r.method, float(r.beta), float(r.beta_frac), float(r.tau), bool(r.degenerate)) for r in records],
        columns=["method", "beta", "beta_frac", "tau", "degenerate"],
    )
    return Table("sir", frame)


def rbo_table(method: str, against: str, values: Sequence[tuple[float, float]]) -> Table:
    frame = pd.DataFrame([(float(p), float(v)) for p, v in values], columns=["p", "rbo"])
    return Table("rbo", frame, method=f"{method}_vs_{against}")


def compare_table(rows: Sequence[MethodComparison], against: str) -> Table:
    frame = pd.DataFrame(
        [(r.method, float(r.monotonicity), float(r.tau), bool(r.degenerate)) for r in rows],
        columns=["method", "monotonicity", "tau", "degenerate"],
    )
    return Table("compare", frame, method=f"vs_{against}", label_column="method")
