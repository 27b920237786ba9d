"""Pure state machines for the two negotiation roles.

The SU broadcasts its channel demand, collects one reply per PU, picks
the cheapest offer and confirms it; each PU either quotes its unit
price or refuses when it lacks free channels.  Every operation is a
pure function of its arguments (the id counter is threaded through
explicitly), so a whole negotiation can be replayed step by step.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

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
    SU_ID,
)


class EmptyPuSet(ValueError):
    """The SU was asked to negotiate with nobody."""


class NotAddressee(Exception):
    """A PU received a message meant for someone else."""


class DuplicateReply(Exception):
    """The same PU answered the same request twice."""


class UnknownPu(Exception):
    """Reply from a PU outside this conversation."""


class NotReady(Exception):
    """Decision requested before all replies arrived."""


class Oversubscribed(Exception):
    """Confirmed demand exceeds the PU's free channels."""


class PaymentMode(Enum):
    """How the confirmed amount is derived from the winning quote."""

    UNIT_PRICE = "unit"   # pay the quoted unit price as-is
    TOTAL_PRICE = "total"  # pay unit price times channels requested


class Phase(Enum):
    COLLECTING = "collecting"
    DECIDED = "decided"


@dataclass(frozen=True)
class PuProfile:
    """A primary user's tradable state: free channels and unit price."""

    id: AgentId
    free_channels: int
    unit_price: int

    def __post_init__(self) -> None:
        if self.id.role is not Role.PU:
            raise ValueError("PuProfile id must have role PU")
        if self.free_channels < 0:
            raise ValueError("free_channels must be >= 0")
        if self.unit_price <= 0:
            raise ValueError("unit_price must be > 0")


@dataclass(frozen=True)
class SuDemand:
    """Number of channels the SU needs."""

    nbc: int

    def __post_init__(self) -> None:
        if self.nbc < 1:
            raise ValueError("nbc must be >= 1")


@dataclass(frozen=True)
class Offer:
    pu: AgentId
    unit_price: int


@dataclass(frozen=True)
class SuState:
    """SU-side bookkeeping while replies are being collected.

    `pending` holds PUs that have not answered yet; `offers` keeps
    quotes in arrival order; `refusals` the PUs that could not serve.
    The phase flips to DECIDED exactly when every PU has answered.
    """

    demand: SuDemand
    pending: frozenset[AgentId]
    offers: tuple[Offer, ...]
    refusals: frozenset[AgentId]
    phase: Phase


@dataclass(frozen=True)
class Award:
    winner: AgentId
    unit_price: int
    amount: int


@dataclass(frozen=True)
class NoDeal:
    pass


Decision = Award | NoDeal


def su_init(
    demand: SuDemand,
    pus: list[AgentId],
    conv: int,
    ids: IdCounter,
    now: float = 0.0,
) -> tuple[SuState, list[AclMessage]]:
    """Open the negotiation: one channel request per PU, index order.

    Raises EmptyPuSet when there is nobody to negotiate with.
    """
    if not pus:
        raise EmptyPuSet("pus must be nonempty")
    if len({pu.index for pu in pus}) != len(pus):
        raise ValueError("PU indices must be unique")
    requests = [
        AclMessage(
            msg_id=ids.next_id(),
            conversation_id=conv,
            sender=SU_ID,
            receiver=pu,
            performative=Performative.REQUEST,
            body=ChannelRequest(demand.nbc),
            send_time=now,
        )
        for pu in sorted(pus, key=lambda p: p.index)
    ]
    state = SuState(
        demand=demand,
        pending=frozenset(pus),
        offers=(),
        refusals=frozenset(),
        phase=Phase.COLLECTING,
    )
    return state, requests


def pu_handle_request(
    profile: PuProfile,
    msg: AclMessage,
    ids: IdCounter,
    now: float,
) -> AclMessage:
    """Answer a channel request: quote when feasible, refuse otherwise.

    Feasible means the demand fits in the PU's free channels
    (boundary included).  The profile itself does not change until a
    confirmation arrives.
    """
    if msg.receiver != profile.id:
        raise NotAddressee(f"request for {msg.receiver}, handled by {profile.id}")
    assert isinstance(msg.body, ChannelRequest)
    if msg.body.nbc <= profile.free_channels:
        performative = Performative.INFORM
        body: PriceQuote | Refusal = PriceQuote(profile.unit_price)
    else:
        performative = Performative.REFUSE
        body = Refusal(profile.free_channels)
    return AclMessage(
        msg_id=ids.next_id(),
        conversation_id=msg.conversation_id,
        sender=profile.id,
        receiver=msg.sender,
        performative=performative,
        body=body,
        send_time=now,
    )


def su_handle_reply(state: SuState, msg: AclMessage) -> SuState:
    """Record one PU reply; flip to DECIDED once all PUs answered."""
    sender = msg.sender
    if sender in state.refusals or any(o.pu == sender for o in state.offers):
        raise DuplicateReply(f"{sender} already replied")
    if sender not in state.pending:
        raise UnknownPu(f"{sender} is not part of this conversation")
    pending = state.pending - {sender}
    offers = state.offers
    refusals = state.refusals
    if msg.performative is Performative.INFORM:
        assert isinstance(msg.body, PriceQuote)
        offers = offers + (Offer(sender, msg.body.unit_price),)
    elif msg.performative is Performative.REFUSE:
        refusals = refusals | {sender}
    else:
        raise ValueError(f"not a reply performative: {msg.performative}")
    phase = Phase.DECIDED if not pending else Phase.COLLECTING
    return replace(state, pending=pending, offers=offers, refusals=refusals, phase=phase)


def select_best_offer(offers: tuple[Offer, ...] | list[Offer]) -> Offer | None:
    """Cheapest quote wins; price ties go to the lowest PU index."""
    if not offers:
        return None
    return min(offers, key=lambda o: (o.unit_price, o.pu.index))


def su_decide(
    state: SuState,
    payment_mode: PaymentMode,
    conv: int,
    ids: IdCounter,
    now: float = 0.0,
) -> tuple[Decision, list[AclMessage]]:
    """Close the negotiation once every reply is in.

    With at least one offer the result is an award plus a single
    confirmation message to the winner; with none, a no-deal and
    silence (the losing PUs are never notified).
    """
    if state.phase is not Phase.DECIDED:
        raise NotReady("replies still outstanding")
    best = select_best_offer(state.offers)
    if best is None:
        return NoDeal(), []
    if payment_mode is PaymentMode.TOTAL_PRICE:
        amount = best.unit_price * state.demand.nbc
    else:
        amount = best.unit_price
    confirm = AclMessage(
        msg_id=ids.next_id(),
        conversation_id=conv,
        sender=SU_ID,
        receiver=best.pu,
        performative=Performative.CONFIRM,
        body=Confirmation(amount),
        send_time=now,
    )
    return Award(winner=best.pu, unit_price=best.unit_price, amount=amount), [confirm]


def pu_handle_confirm(
    profile: PuProfile,
    demand: SuDemand,
    msg: AclMessage,
    ids: IdCounter,
    now: float = 0.0,
) -> tuple[PuProfile, AclMessage]:
    """Allocate the channels and acknowledge.

    Raises Oversubscribed if the PU no longer holds enough channels;
    cannot happen in a single-round run but guards reuse of profiles
    across rounds.
    """
    assert isinstance(msg.body, Confirmation)
    if profile.free_channels < demand.nbc:
        raise Oversubscribed(
            f"{profile.id} has {profile.free_channels} free, demand is {demand.nbc}"
        )
    updated = replace(profile, free_channels=profile.free_channels - demand.nbc)
    ack = AclMessage(
        msg_id=ids.next_id(),
        conversation_id=msg.conversation_id,
        sender=profile.id,
        receiver=msg.sender,
        performative=Performative.ACCEPT_PROPOSAL,
        body=Acceptance(),
        send_time=now,
    )
    return updated, ack
