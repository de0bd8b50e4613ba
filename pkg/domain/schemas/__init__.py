from .graph import Edge, WeightedGraph, Matching, Outcome, normalize_edge
from .lp import LpProblem, LpState
from .states import StableState, BalanceState, BalanceErrors, NashState, DisturbanceSpec
from .trajectory import Trajectory
from .scenario import Device, WirelessScenario, ImprovementRow, ImprovementReport
from .runs import RunConfig, StableRunResult, BalancedRunResult, NashRunResult, PredicateReport, \
    RunSummary, OracleVerdict, VerifyReport, SweepRow
