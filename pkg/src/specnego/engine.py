"""Deterministic event-driven execution of one negotiation round.

Time is simulated: every hop costs `transit_delay`, a PU thinks for
`pu_proc_delay` before answering, and the SU works through its inbox
serially at `su_proc_delay` per reply.  Events are ordered by
(time, insertion sequence), so equal-time deliveries keep the order in
which they were sent and two runs of the same scenario are
byte-identical.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from . import agents
from .agents import PaymentMode, Phase, PuProfile, SuDemand
from .protocol import (
    Acceptance,
    AclMessage,
    AgentId,
    ChannelRequest,
    Confirmation,
    IdCounter,
    Performative,
    PriceQuote,
    Refusal,
    Role,
    next_conversation_id,
    validate_message,
)


class InvalidScenario(ValueError):
    """Scenario violates one of its structural rules."""


@dataclass(frozen=True)
class LatencyModel:
    """Per-message and per-agent delays, in simulated time units.

    Defaults are calibrated only to reproduce the qualitative shape of
    the reference measurements (response time grows with the number of
    PUs); they carry no physical meaning.
    """

    transit_delay: float = 1.0
    pu_proc_delay: float = 0.5
    su_proc_delay: float = 0.5

    def __post_init__(self) -> None:
        for name in ("transit_delay", "pu_proc_delay", "su_proc_delay"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise InvalidScenario(f"{name} must be finite")
            if value < 0:
                raise InvalidScenario(f"{name} must be nonnegative")
        if self.transit_delay <= 0:
            raise InvalidScenario("transit_delay must be > 0")


@dataclass(frozen=True)
class Scenario:
    """Complete input of one simulation run."""

    pus: tuple[PuProfile, ...]
    demand: SuDemand
    latency: LatencyModel = LatencyModel()
    payment_mode: PaymentMode = PaymentMode.UNIT_PRICE
    seed: int = 0

    def __post_init__(self) -> None:
        validate_scenario(self)


def validate_scenario(scenario: Scenario) -> None:
    """Raise InvalidScenario naming the first rule the scenario breaks."""
    if not scenario.pus:
        raise InvalidScenario("pus must be nonempty")
    for position, pu in enumerate(scenario.pus, start=1):
        if pu.id.index != position:
            raise InvalidScenario(
                f"PU indices must be contiguous 1..N: "
                f"position {position} holds {pu.id}"
            )
    if scenario.demand.nbc < 1:
        raise InvalidScenario("nbc must be >= 1")
    if not 0 <= scenario.seed < 2**64:
        raise InvalidScenario("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class TraceRecord:
    """Sniffer view of one delivered message."""

    time: float
    sender: AgentId
    receiver: AgentId
    performative: Performative
    body_summary: str


@dataclass(frozen=True)
class Success:
    winner: AgentId
    unit_price: int
    amount_paid: int


@dataclass(frozen=True)
class Failure:
    pass


@dataclass(frozen=True)
class NegotiationOutcome:
    """Terminal result of a run.

    On success the trace holds 2N+2 messages (N requests, N replies,
    one confirmation, one acknowledgement); on failure 2N.
    `elapsed` runs from the opening broadcast to the SU's decision.
    """

    status: Success | Failure
    responses: int
    elapsed: float
    message_count: int


def elapsed_formula(n_pus: int, lat: LatencyModel) -> float:
    """Closed-form decision time the event simulation must reproduce.

    All requests leave at t=0 and the PUs work in parallel, so every
    reply lands at 2*transit + pu_proc; the SU then processes the
    n replies one after another.
    """
    if n_pus < 1:
        raise ValueError("n_pus must be >= 1")
    return 2 * lat.transit_delay + lat.pu_proc_delay + n_pus * lat.su_proc_delay


def summarize_body(body: object) -> str:
    """Compact single-token rendering of a message body for the trace."""
    if isinstance(body, ChannelRequest):
        return f"nbc={body.nbc}"
    if isinstance(body, PriceQuote):
        return f"price={body.unit_price}"
    if isinstance(body, Refusal):
        return f"available={body.available}"
    if isinstance(body, Confirmation):
        return f"amount={body.amount}"
    if isinstance(body, Acceptance):
        return ""
    raise TypeError(f"unknown body type: {type(body).__name__}")


@dataclass
class _EventQueue:
    """Min-heap of pending deliveries, ordered by (time, seq)."""

    _heap: list[tuple[float, int, AclMessage]] = field(default_factory=list)
    _seq: int = 0

    def push(self, time: float, msg: AclMessage) -> None:
        heapq.heappush(self._heap, (time, self._seq, msg))
        self._seq += 1

    def pop(self) -> tuple[float, AclMessage]:
        time, _, msg = heapq.heappop(self._heap)
        return time, msg

    def __bool__(self) -> bool:
        return bool(self._heap)


def run_negotiation(scenario: Scenario) -> tuple[NegotiationOutcome, list[TraceRecord]]:
    """Play the whole protocol and return the outcome plus the trace.

    Timeline: the SU broadcasts at t=0; each request arrives one
    transit later; a PU answers after its processing delay and the
    reply travels one more transit; the SU charges its own processing
    delay per reply, deciding the moment the last one is done.  An
    award is followed by a confirm/acknowledge exchange that closes
    the trace.  Purely deterministic: no RNG is consulted.
    """
    validate_scenario(scenario)
    lat = scenario.latency
    msg_ids = IdCounter()
    conv_ids = IdCounter()
    conv = next_conversation_id(conv_ids)

    profiles = {pu.id: pu for pu in scenario.pus}
    queue = _EventQueue()
    trace: list[TraceRecord] = []

    def send(msg: AclMessage) -> None:
        validate_message(msg)
        trace.append(
            TraceRecord(
                time=msg.send_time,
                sender=msg.sender,
                receiver=msg.receiver,
                performative=msg.performative,
                body_summary=summarize_body(msg.body),
            )
        )
        queue.push(msg.send_time + lat.transit_delay, msg)

    su_state, requests = agents.su_init(
        scenario.demand, [pu.id for pu in scenario.pus], conv, msg_ids, now=0.0
    )
    for msg in requests:
        send(msg)

    decision: agents.Award | agents.NoDeal | None = None
    decision_time = 0.0
    su_free_at = 0.0

    while queue:
        now, msg = queue.pop()
        validate_message(msg)
        if msg.performative is Performative.REQUEST:
            reply = agents.pu_handle_request(
                profiles[msg.receiver], msg, msg_ids, now=now + lat.pu_proc_delay
            )
            send(reply)
        elif msg.performative in (Performative.INFORM, Performative.REFUSE):
            # The SU drains its inbox serially: each reply occupies it
            # for su_proc_delay after the later of arrival and idleness.
            su_free_at = max(now, su_free_at) + lat.su_proc_delay
            su_state = agents.su_handle_reply(su_state, msg)
            if su_state.phase is Phase.DECIDED:
                decision_time = su_free_at
                decision, confirms = agents.su_decide(
                    su_state, scenario.payment_mode, conv, msg_ids, now=decision_time
                )
                for confirm in confirms:
                    send(confirm)
        elif msg.performative is Performative.CONFIRM:
            updated, ack = agents.pu_handle_confirm(
                profiles[msg.receiver],
                scenario.demand,
                msg,
                msg_ids,
                now=now + lat.pu_proc_delay,
            )
            profiles[msg.receiver] = updated
            send(ack)
        elif msg.performative is Performative.ACCEPT_PROPOSAL:
            pass  # terminal hop; nothing left to do
        else:  # pragma: no cover - performative enum is closed
            raise AssertionError(msg.performative)

    assert decision is not None, "every PU replies, so a decision is always reached"
    if isinstance(decision, agents.Award):
        status: Success | Failure = Success(
            winner=decision.winner,
            unit_price=decision.unit_price,
            amount_paid=decision.amount,
        )
    else:
        status = Failure()
    outcome = NegotiationOutcome(
        status=status,
        responses=len(su_state.offers) + len(su_state.refusals),
        elapsed=decision_time,
        message_count=len(trace),
    )
    return outcome, trace
