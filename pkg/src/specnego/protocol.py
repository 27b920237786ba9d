"""Message vocabulary for the channel-trading protocol.

A negotiation exchanges five kinds of speech acts between the secondary
user (SU) and the primary users (PUs).  Each performative is paired with
exactly one body type, and each flows in exactly one direction; both
rules are enforced here so that a malformed message cannot travel
through the simulator unnoticed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Performative(Enum):
    """Speech-act type of a message."""

    REQUEST = "REQUEST"
    INFORM = "INFORM"
    REFUSE = "REFUSE"
    CONFIRM = "CONFIRM"
    ACCEPT_PROPOSAL = "ACCEPT_PROPOSAL"


class Role(Enum):
    SU = "SU"
    PU = "PU"


class ProtocolViolation(Exception):
    """A message broke one of the protocol's structural rules."""


class BodyMismatch(ProtocolViolation):
    """Body variant does not belong to the message's performative."""


class WrongDirection(ProtocolViolation):
    """Message flows the wrong way for its performative."""


@dataclass(frozen=True)
class AgentId:
    """Identity of a negotiation participant.

    The single SU has index 0; PUs are numbered from 1.
    """

    role: Role
    index: int = 0

    def __post_init__(self) -> None:
        if self.role is Role.SU and self.index != 0:
            raise ValueError("SU index must be 0")
        if self.role is Role.PU and self.index < 1:
            raise ValueError("PU index must be >= 1")

    def __str__(self) -> str:
        if self.role is Role.SU:
            return "SU"
        return f"PU{self.index}"


SU_ID = AgentId(Role.SU, 0)


def pu_id(index: int) -> AgentId:
    return AgentId(Role.PU, index)


@dataclass(frozen=True)
class ChannelRequest:
    """SU asks for `nbc` channels."""

    nbc: int

    def __post_init__(self) -> None:
        if self.nbc < 1:
            raise ValueError("nbc must be >= 1")


@dataclass(frozen=True)
class PriceQuote:
    """PU can serve the demand and quotes its per-channel price."""

    unit_price: int

    def __post_init__(self) -> None:
        if self.unit_price <= 0:
            raise ValueError("unit_price must be > 0")


@dataclass(frozen=True)
class Refusal:
    """PU cannot serve the demand; reports how many channels it has."""

    available: int

    def __post_init__(self) -> None:
        if self.available < 0:
            raise ValueError("available must be >= 0")


@dataclass(frozen=True)
class Confirmation:
    """SU commits to the winning offer and states the payment."""

    amount: int

    def __post_init__(self) -> None:
        if self.amount <= 0:
            raise ValueError("amount must be > 0")


@dataclass(frozen=True)
class Acceptance:
    """PU acknowledges the confirmed allocation."""


MessageBody = ChannelRequest | PriceQuote | Refusal | Confirmation | Acceptance

# One body type per performative; constructing any other combination fails.
BODY_FOR_PERFORMATIVE: dict[Performative, type] = {
    Performative.REQUEST: ChannelRequest,
    Performative.INFORM: PriceQuote,
    Performative.REFUSE: Refusal,
    Performative.CONFIRM: Confirmation,
    Performative.ACCEPT_PROPOSAL: Acceptance,
}

# Performatives sent by the SU; all others are PU replies.
SU_SENT = frozenset({Performative.REQUEST, Performative.CONFIRM})


@dataclass(frozen=True)
class AclMessage:
    """One negotiation step between two agents.

    `msg_id` values are allocated by a single counter per simulation run
    and are therefore unique and strictly increasing in creation order.
    `send_time` is simulated time, not wall clock.
    """

    msg_id: int
    conversation_id: int
    sender: AgentId
    receiver: AgentId
    performative: Performative
    body: MessageBody
    send_time: float = 0.0

    def __post_init__(self) -> None:
        expected = BODY_FOR_PERFORMATIVE[self.performative]
        if type(self.body) is not expected:
            raise BodyMismatch(
                f"{self.performative.value} requires {expected.__name__}, "
                f"got {type(self.body).__name__}"
            )
        if self.send_time < 0:
            raise ValueError("send_time must be nonnegative")


def validate_message(msg: AclMessage) -> None:
    """Check body pairing and flow direction; raise on violation.

    Raises BodyMismatch if the body variant is wrong for the
    performative, WrongDirection if the sender/receiver roles do not
    match the performative's fixed direction.  Idempotent: a message
    that passes once passes always.
    """
    expected = BODY_FOR_PERFORMATIVE[msg.performative]
    if type(msg.body) is not expected:
        raise BodyMismatch(
            f"{msg.performative.value} requires {expected.__name__}, "
            f"got {type(msg.body).__name__}"
        )
    if msg.performative in SU_SENT:
        want_from, want_to = Role.SU, Role.PU
    else:
        want_from, want_to = Role.PU, Role.SU
    if msg.sender.role is not want_from or msg.receiver.role is not want_to:
        raise WrongDirection(
            f"{msg.performative.value} must flow "
            f"{want_from.value}->{want_to.value}, "
            f"got {msg.sender}->{msg.receiver}"
        )


@dataclass
class IdCounter:
    """Monotonic id source, confined to one simulation run.

    Used for both message ids and conversation ids (separate
    instances).  A fresh counter issues 1 first.
    """

    last: int = field(default=0)

    def next_id(self) -> int:
        self.last += 1
        return self.last


def next_conversation_id(counter: IdCounter) -> int:
    """Issue a conversation id strictly greater than all previous ones."""
    return counter.next_id()
