"""Deterministic simulator of one-to-many spectrum negotiation.

One secondary user (SU) broadcasts a channel demand to N primary users
(PUs), collects their price quotes, awards the cheapest feasible offer
and confirms the allocation.  The package provides the message
protocol, the pure agent state machines, a discrete-event engine with
a simulated latency model, scenario/trace/CSV file formats and the two
evaluation sweeps, all reproducible bit for bit.
"""

from .agents import (
    Award,
    Decision,
    NoDeal,
    Offer,
    PaymentMode,
    PuProfile,
    SuDemand,
    select_best_offer,
)
from .engine import (
    Failure,
    InvalidScenario,
    LatencyModel,
    NegotiationOutcome,
    Scenario,
    Success,
    TraceRecord,
    elapsed_formula,
    run_negotiation,
)
from .evaluation import (
    CostRow,
    NegotiationValue,
    classify,
    expected_total_cost,
    sweep_num_pus,
    sweep_success_rate,
)
from .protocol import (
    AclMessage,
    AgentId,
    Performative,
    ProtocolViolation,
    Role,
    SU_ID,
    pu_id,
    validate_message,
)
from .scenario_io import (
    ScenarioSemanticError,
    ScenarioSyntaxError,
    parse_scenario,
    serialize_scenario,
    write_csv,
    write_trace,
)

__version__ = "0.1.0"

__all__ = [
    "AclMessage",
    "AgentId",
    "Award",
    "CostRow",
    "Decision",
    "Failure",
    "InvalidScenario",
    "LatencyModel",
    "NegotiationOutcome",
    "NegotiationValue",
    "NoDeal",
    "Offer",
    "PaymentMode",
    "Performative",
    "ProtocolViolation",
    "PuProfile",
    "Role",
    "SU_ID",
    "Scenario",
    "ScenarioSemanticError",
    "ScenarioSyntaxError",
    "SuDemand",
    "Success",
    "TraceRecord",
    "classify",
    "elapsed_formula",
    "expected_total_cost",
    "parse_scenario",
    "pu_id",
    "run_negotiation",
    "select_best_offer",
    "serialize_scenario",
    "sweep_num_pus",
    "sweep_success_rate",
    "validate_message",
    "write_csv",
    "write_trace",
]
