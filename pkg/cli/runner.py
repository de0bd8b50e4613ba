"""Glue between the command line and the services: runs, summaries, output files."""
import logging
import time
from collections.abc import Iterable
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from domain import services
from domain.core.constants import STALL_TOL
from domain.core.errors import DivergenceError, RunOutcomeError, SizeGuardError
from domain.schemas import (DisturbanceSpec, Matching, OracleVerdict, Outcome, PredicateReport, RunConfig,
                            RunSummary, SweepRow, Trajectory, VerifyReport, WeightedGraph)
from domain.services.oracles import exact
from infrastructure.files import outputs
from utils.enums import ExitCode, NoiseKind, OutcomeClass, SimulationMode

logger = logging.getLogger(__name__)

TRAJECTORY_FILE = "trajectory.csv"
SUMMARY_FILE = "summary.json"


def predicate_report(g: WeightedGraph, outcome: Outcome, tol: float) -> PredicateReport:
    return PredicateReport(
        valid=services.is_valid_outcome(g, outcome, tol),
        stable=services.is_stable(g, outcome, tol),
        balanced=services.is_balanced(g, outcome, tol),
        nash=services.is_nash(g, outcome, tol),
    )


def disturbance_for(config: RunConfig) -> DisturbanceSpec | None:
    if config.noise_kind == NoiseKind.none or config.noise_bound == 0:
        return None
    return DisturbanceSpec(kind=config.noise_kind, bound=config.noise_bound, seed=config.seed)


def nash_run(g: WeightedGraph, config: RunConfig, disturbance: DisturbanceSpec | None):
    return services.run_nash(
        g,
        None,
        config.dt,
        config.t_final,
        disturbance,
        sample_stride=config.sample_stride,
        max_norm=config.max_norm,
        prediction_dwell=config.prediction_dwell,
        stall_tol=STALL_TOL,
    )


def simulate(
        mode: SimulationMode,
        g: WeightedGraph,
        config: RunConfig,
        *,
        graph_label: str,
        matching: Matching | None = None,
        out: Path | None = None,
        emit_plot_data: bool = False,
) -> tuple[RunSummary, ExitCode]:
    """Run one simulation, write its files under `out` and return (summary, exit code)."""
    started = time.perf_counter()
    fields: dict = {}
    trajectory: Trajectory | None = None
    noisy: Trajectory | None = None
    status, code, message = "converged", ExitCode.ok, ""

    try:
        if mode == SimulationMode.stable:
            result = services.run_stable(
                g,
                None,
                config.dt,
                config.t_final,
                threshold=config.threshold,
                sample_stride=config.sample_stride,
                max_norm=config.max_norm,
            )
            trajectory = result.trajectory
            outcome = Outcome(matching=result.matching, alloc=result.alloc)
            fields.update(kkt_residual=result.kkt_residual, stability_residual=result.stability_residual,
                          t_end=result.t_end)

        elif mode == SimulationMode.balanced:
            result = services.run_balanced(
                g,
                matching or Matching(),
                None,
                config.dt,
                config.t_final,
                sample_stride=config.sample_stride,
                max_norm=config.max_norm,
            )
            trajectory = result.trajectory
            outcome = result.outcome
            fields.update(t_end=result.t_end)

        else:
            disturbance = disturbance_for(config)
            result = nash_run(g, config, disturbance)
            trajectory = result.trajectory
            outcome = result.outcome
            fields.update(settlement_time=result.settlement_time, t_end=result.t_end)
            if disturbance is not None and emit_plot_data:
                noisy, trajectory = trajectory, nash_run(g, config, None).trajectory

        fields.update(
            matching=outcome.matching.sorted_pairs(),
            alloc=list(outcome.alloc),
            predicates=predicate_report(g, outcome, config.tol),
        )
        if mode == SimulationMode.nash and not fields["predicates"].nash:
            status, code, message = "not_nash", ExitCode.undecided, "settled outcome is not a Nash outcome"

    except RunOutcomeError as exc:
        status, code, message = "undecided", ExitCode.undecided, str(exc)
        partial = exc.result
        if partial is not None:
            trajectory = partial.trajectory
            fields.update(t_end=partial.t_end)
            if hasattr(partial, "kkt_residual"):
                fields.update(kkt_residual=partial.kkt_residual, stability_residual=partial.stability_residual)

    except DivergenceError as exc:
        status, code, message = "diverged", ExitCode.diverged, str(exc)
        fields.update(t_end=exc.t)

    summary = RunSummary(
        mode=mode,
        graph=graph_label,
        status=status,
        message=message,
        config=config,
        wall_time=time.perf_counter() - started,
        **fields,
    )
    logger.info(f"Simulation_done mode={mode.value} graph={graph_label} status={status}")

    if out is not None:
        out = Path(out)
        if trajectory is not None:
            outputs.write_trajectory_csv(trajectory, out / TRAJECTORY_FILE)
            if emit_plot_data:
                outputs.write_plot_data(trajectory, out, noisy)
        outputs.write_json(summary, out / SUMMARY_FILE)

    return summary, code


def oracle_verdict(g: WeightedGraph, outcome: Outcome, tol: float) -> OracleVerdict:
    mwm, weight, unique = services.max_weight_matching(g)
    value, _, integral = services.lp_relaxation_optimum(g)
    claimed_weight = sum(exact(g.weight(i, j)) for i, j in outcome.matching.pairs)

    matches_nash = any(
        candidate.matching == outcome.matching
        and all(abs(a - b) <= tol for a, b in zip(candidate.alloc, outcome.alloc))
        for candidate in services.nash_oracle(g)
    )
    return OracleVerdict(
        stable_outcome_exists=integral,
        mwm_weight=float(weight),
        mwm_unique=unique,
        matching_is_mwm=claimed_weight == weight,
        lp_relaxation_value=float(value),
        lp_relaxation_integral=integral,
        matches_nash_oracle=matches_nash,
    )


def verify(g: WeightedGraph, outcome: Outcome, claim: OutcomeClass, tol: float) -> VerifyReport:
    """Check a claimed outcome class against the predicates and the brute-force oracle."""
    services.validate_matching(g, outcome.matching)
    predicates = predicate_report(g, outcome, tol)
    oracle = oracle_verdict(g, outcome, tol)

    holds = {
        OutcomeClass.valid: predicates.valid,
        OutcomeClass.stable: predicates.valid and predicates.stable,
        OutcomeClass.balanced: predicates.valid and predicates.balanced,
        OutcomeClass.nash: predicates.valid and predicates.nash and oracle.matches_nash_oracle,
    }
    report = VerifyReport(claimed=claim.value, predicates=predicates, oracle=oracle, confirmed=holds[claim])
    logger.info(f"Verify_done claim={claim.value} confirmed={report.confirmed}")
    return report


def _sweep_one(label: str, g: WeightedGraph, config: RunConfig, out: Path | None) -> SweepRow:
    try:
        summary, _ = simulate(SimulationMode.nash, g, config, graph_label=label, out=out)
    except Exception as exc:
        logger.exception(f"Sweep_run_failed graph={label}")
        return SweepRow(graph=label, status="error", error=str(exc))

    settled = summary.status in ("converged", "not_nash")
    row = SweepRow(
        graph=label,
        status=summary.status,
        settled=settled,
        settlement_time=summary.settlement_time,
        is_nash=summary.predicates.nash if summary.predicates else None,
    )
    if settled:
        try:
            mwm, _, _ = services.max_weight_matching(g)
            row.matches_oracle_mwm = Matching(pairs=summary.matching) == mwm
        except SizeGuardError as exc:
            row.error = str(exc)
    return row


def sweep(
        graphs: Iterable[tuple[str, WeightedGraph]],
        config: RunConfig,
        out: Path | None,
        workers: int,
) -> list[SweepRow]:
    """Nash runs on every graph in parallel, one output directory per graph."""
    jobs = list(graphs)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_sweep_one, label, g, config, None if out is None else Path(out) / label)
            for label, g in jobs
        ]
        rows = [future.result() for future in futures]

    passed = sum(1 for row in rows if row.settled and row.matches_oracle_mwm and row.is_nash)
    logger.info(f"Sweep_done graphs={len(rows)} passed={passed}")
    return rows
