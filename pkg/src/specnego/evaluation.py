"""The two experiments: response time vs PU count, cost vs success rate.

Also provides the classifier that says whether a finished negotiation
actually bought the SU anything: polling every PU was redundant when
the first one would have won anyway.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

from .engine import NegotiationOutcome, Scenario, Success, run_negotiation


class TooFewPus(ValueError):
    """Sweep asked for more PUs than the scenario provides."""


class NonIntegralSuccessCount(ValueError):
    """rate*runs/100 is not a whole number of runs."""


class NegotiationValue(Enum):
    """What the negotiation was worth to the SU.

    USEFUL: the winner differs from the first-listed PU, so polling the
    others changed the result.  REDUNDANT: the first PU won anyway and
    the SU negotiated for nothing.  FAILED: nobody could serve.
    """

    USEFUL = "useful"
    REDUNDANT = "redundant"
    FAILED = "failed"


@dataclass(frozen=True)
class CostRow:
    """Total amount paid over a batch at a given success rate."""

    success_rate: int
    total_cost: int


def classify(outcome: NegotiationOutcome, scenario: Scenario) -> NegotiationValue:
    """Classify a completed negotiation against its scenario.

    The baseline without negotiation is dealing with the first PU in
    the list, so a success is redundant exactly when that PU ends up
    winning anyway.
    """
    if not isinstance(outcome.status, Success):
        return NegotiationValue.FAILED
    if outcome.status.winner == scenario.pus[0].id:
        return NegotiationValue.REDUNDANT
    return NegotiationValue.USEFUL


def expected_total_cost(rate: int, p_success: int, p_fail: int, runs: int) -> int:
    """Total paid over `runs` negotiations succeeding `rate` percent of
    the time: successes cost p_success each, failures p_fail each.

    Raises NonIntegralSuccessCount when rate*runs is not a multiple of
    100.
    """
    if not 0 <= rate <= 100:
        raise ValueError("rate must be within [0, 100]")
    if runs < 0:
        raise ValueError("runs must be >= 0")
    if (rate * runs) % 100 != 0:
        raise NonIntegralSuccessCount(
            f"rate {rate}% of {runs} runs is not a whole number"
        )
    k = rate * runs // 100
    return k * p_success + (runs - k) * p_fail


def sweep_num_pus(base: Scenario, n_max: int) -> list[tuple[int, float]]:
    """Run the negotiation on growing PU-list prefixes of `base`.

    Returns (n_pus, elapsed) rows for n = 1..n_max, demand and latency
    held fixed.  Raises TooFewPus when n_max exceeds the PU list.
    """
    if n_max > len(base.pus):
        raise TooFewPus(f"n_max={n_max} but scenario has {len(base.pus)} PUs")
    rows = []
    for n in range(1, n_max + 1):
        outcome, _ = run_negotiation(replace(base, pus=base.pus[:n]))
        rows.append((n, outcome.elapsed))
    return rows


def sweep_success_rate(p_success: int, p_fail: int, runs: int) -> list[CostRow]:
    """Tabulate expected_total_cost for rates 0, 10, ..., 100."""
    return [
        CostRow(rate, expected_total_cost(rate, p_success, p_fail, runs))
        for rate in range(0, 101, 10)
    ]
