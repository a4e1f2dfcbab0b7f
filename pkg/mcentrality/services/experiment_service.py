import json
import logging
from dataclasses import asdict
from functools import cached_property
from typing import Optional, Sequence

import pandas as pd

from mcentrality.db_models import ResultRow, RunRow
from mcentrality.dtos import (AttackReport, BetaGrid, CentralityVector,
                              CorrelationRecord, EfficiencyNorm,
                              EntropyWeights, ExperimentConfig, GraphStats,
                              MCentralityVector, MethodComparison, RankingList, RboParams,
                              SirConfig)
from mcentrality.errors import InvalidParameterError
from mcentrality.evaluation import (compare_methods, efficiency_decline, rank_nodes,
                                    rbo, top_order)
from mcentrality.graph import Graph, largest_connected_component, read_edge_list
from mcentrality.m_centrality import m_centrality
from mcentrality.methods import compute_all, compute_centrality
from mcentrality.report import Table
from mcentrality.services.base import BaseService
from mcentrality.sir import sir_correlation_sweep
from mcentrality.stats import graph_stats

logger = logging.getLogger(__name__)


class ExperimentService:
    """Experiment use-cases over one input network, with optional result persistence."""

    def __init__(self, cfg: ExperimentConfig, db_url: Optional[str] = None) -> None:
        self.cfg = cfg
        # Repos
        self.runs_repo = BaseService(RunRow, db_url)
        self.results_repo = BaseService(ResultRow, db_url)

    @cached_property
    def full_graph(self) -> Graph:
        with open(self.cfg.input_path, "rb") as fh:
            result = read_edge_list(fh)
        g = result.graph
        logger.info("Loaded %s: n=%d m=%d", self.cfg.input_path, g.n, g.m)
        return g

    @cached_property
    def graph(self) -> Graph:
        """The network methods run on: the giant component unless ``lcc`` is off."""
        g = self.full_graph
        if not self.cfg.lcc:
            return g
        lcc = largest_connected_component(g)
        if lcc.n != g.n:
            logger.info("Restricted to largest component: %d of %d nodes", lcc.n, g.n)
        return lcc

    @cached_property
    def m_parts(self) -> MCentralityVector:
        return m_centrality(self.graph, self.cfg.params.mu)

    # --- Single-method use-cases ---
    def stats(self) -> GraphStats:
        return graph_stats(self.full_graph)

    def weights(self) -> EntropyWeights:
        mv = m_centrality(self.graph)
        assert mv.weights is not None
        return mv.weights

    def centralities(self, methods: Optional[Sequence[str]] = None) -> list[CentralityVector]:
        return compute_all(self.graph, methods or self.cfg.methods, self.cfg.params)

    def rank(self, method: str) -> tuple[CentralityVector, RankingList]:
        if method == "m":
            vec = self.m_parts.as_centrality()
        else:
            vec = compute_centrality(self.graph, method, self.cfg.params)
        return vec, rank_nodes(vec)

    def mu_sweep(self) -> list[list[int]]:
        if not self.cfg.mu_values:
            raise InvalidParameterError("mu sweep needs at least one mu value")
        orders = []
        for mu in self.cfg.mu_values:
            vec = m_centrality(self.graph, mu).as_centrality()
            orders.append(top_order(vec, self.cfg.top).tolist())
        return orders

    def attack(
        self,
        method: Optional[str],
        steps: int,
        order_labels: Optional[Sequence[str]] = None,
        normalization: EfficiencyNorm = EfficiencyNorm.RESIDUAL,
    ) -> AttackReport:
        g = self.graph
        if order_labels is not None:
            order = [g.index_of(label) for label in order_labels]
        elif method is not None:
            order = top_order(compute_centrality(g, method, self.cfg.params), steps).tolist()
        else:
            raise InvalidParameterError("attack needs a method or an explicit order")
        return efficiency_decline(g, order, steps, normalization)

    # --- Cross-method comparisons ---
    def sir(self, grid: Optional[BetaGrid] = None) -> list[CorrelationRecord]:
        grid = grid or BetaGrid(self.cfg.beta_fractions)
        sir_cfg = SirConfig(
            runs=self.cfg.runs, master_seed=self.cfg.master_seed, workers=self.cfg.workers
        )
        return sir_correlation_sweep(self.graph, self.centralities(), grid, sir_cfg)

    def rbo(
        self, against: str, ps: Sequence[float], depth: Optional[int] = None
    ) -> dict[str, list[tuple[float, float]]]:
        reference = rank_nodes(compute_centrality(self.graph, against, self.cfg.params))
        out: dict[str, list[tuple[float, float]]] = {}
        for vec in self.centralities():
            ranking = rank_nodes(vec)
            out[vec.method] = [(p, rbo(ranking, reference, RboParams(p, depth))) for p in ps]
        return out

    def compare(self, against: str) -> list[MethodComparison]:
        reference = compute_centrality(self.graph, against, self.cfg.params)
        return compare_methods(self.centralities(), reference)

    # --- Persistence ---
    def record(self, command: str, tables: Sequence[Table]) -> int:
        params = asdict(self.cfg)
        run = self.runs_repo.create(
            command=command,
            input_path=self.cfg.input_path,
            master_seed=str(self.cfg.master_seed),
            params=json.dumps(params, default=str, sort_keys=True),
        )
        count = self.results_repo.bulk_create(self._result_rows(run.id, tables))
        logger.info("Recorded run %d (%s) with %d values", run.id, command, count)
        return run.id

    @staticmethod
    def _result_rows(run_id: int, tables: Sequence[Table]) -> list[dict]:
        """One row per numeric cell; labels come from the table's label column or row number."""
        rows: list[dict] = []
        for table in tables:
            frame = table.frame.reset_index(drop=True)
            numeric = frame.select_dtypes(include="number")
            if numeric.empty:
                continue
            if table.label_column:
                labels = frame[table.label_column].astype(str)
            else:
                labels = pd.Series(frame.index.astype(str), index=frame.index)
            long = numeric.assign(label=labels).melt(
                id_vars="label", var_name="key", value_name="value"
            )
            long["value"] = long["value"].astype(float).astype(object)
            long.loc[long["value"].isna(), "value"] = None
            long["run_id"] = run_id
            long["method"] = table.method or table.command
            rows.extend(long.to_dict(orient="records"))
        return rows
