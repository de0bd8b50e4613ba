"""Bargaining graphs from a TDMA uplink where nearby devices may pool their slots.

Physical constants are normalized to 1 and logarithms are natural.
"""
import logging
import math
from collections.abc import Sequence
from pathlib import Path

from domain.core.errors import DomainValidationError, InvariantViolationError
from domain.core.settings import settings
from domain.schemas import ImprovementReport, ImprovementRow, Outcome, WeightedGraph, WirelessScenario
from infrastructure.files.scenario_format import load_scenario

logger = logging.getLogger(__name__)

REFERENCE_SCENARIO_FILE = "five_devices.scn"

Point = Sequence[float]


def _norm(x: Point) -> float:
    r = math.hypot(*x)
    if r == 0:
        raise DomainValidationError("position coincides with the base station")
    return r


def capacity(x: Point) -> float:
    """Stand-alone rate of a device at position x: ln(1 + 1/|x|)."""
    return math.log1p(1 / _norm(x))


def pair_capacity(xi: Point, xj: Point) -> float:
    return math.log1p(1 / _norm(xi) + 1 / _norm(xj))


def pairing_power(xi: Point, xj: Point) -> float:
    return math.dist(xi, xj)


def inferred_radius(c: float) -> float:
    """Distance to the base station at which a device has capacity c."""
    return 1 / math.expm1(c)


def percent_improvement(gain: float, c: float) -> float:
    return 100 * gain / c if c else 0.0


def build_graph(sc: WirelessScenario) -> WeightedGraph:
    """Devices within `p_max` of each other are linked, weighted by their pooled gain."""
    triples = []
    for a in sc.devices:
        for b in sc.devices:
            if a.id >= b.id or pairing_power(a.position, b.position) > sc.p_max:
                continue
            w = ((a.rho + b.rho) * pair_capacity(a.position, b.position)
                 - a.rho * capacity(a.position) - b.rho * capacity(b.position))
            if a.rho > 0 and b.rho > 0 and not w > 0:
                raise InvariantViolationError(f"pooled gain of devices {a.id} and {b.id} is not positive: {w}")
            triples.append((a.id, b.id, max(w, 0.0)))

    g = WeightedGraph(n=sc.n, weights=triples)
    logger.debug(f"Wireless_graph_built devices={sc.n} edges={g.n_edges}")
    return g


def improvement_report(sc: WirelessScenario, outcome: Outcome) -> ImprovementReport:
    """Per-device capacity, bargained gain and percent improvement, plus two network rows.

    The network rows are the plain mean over devices and the ρ-weighted mean;
    both report percent as total gain over total capacity.
    """
    if len(outcome.alloc) != sc.n:
        raise DomainValidationError(f"allocation has {len(outcome.alloc)} entries for {sc.n} devices")

    rows = []
    for device in sorted(sc.devices, key=lambda d: d.id):
        c = capacity(device.position)
        gain = outcome.alloc[device.id - 1]
        rows.append(ImprovementRow(label=str(device.id), capacity=c, gain=gain, percent=percent_improvement(gain, c)))

    def network_row(label: str, factors: list[float]) -> ImprovementRow:
        total = sum(factors)
        if total == 0:
            return ImprovementRow(label=label, capacity=0.0, gain=0.0, percent=0.0)
        c = sum(f * row.capacity for f, row in zip(factors, rows)) / total
        gain = sum(f * row.gain for f, row in zip(factors, rows)) / total
        return ImprovementRow(label=label, capacity=c, gain=gain, percent=percent_improvement(gain, c))

    rhos = [d.rho for d in sorted(sc.devices, key=lambda d: d.id)]
    return ImprovementReport(
        rows=rows,
        network_mean=network_row("network", [1.0] * len(rows)),
        network_weighted=network_row("network (rho-weighted)", rhos),
    )


def load_reference_scenario(directory: Path | None = None) -> WirelessScenario:
    """The frozen five-device scenario shipped under `scenarios/`."""
    return load_scenario((directory or settings.SCENARIO_DIR) / REFERENCE_SCENARIO_FILE)
