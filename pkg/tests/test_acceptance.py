"""Acceptance gate: every headline behavior, one verdict line each.

Run with `pytest tests/test_acceptance.py -s` to see the verdict lines
on passing runs too (pytest shows captured output only on failure).
Each criterion states its tolerance inline; timing budgets are checked
against a warmed-up best-of-several measurement.
"""

import io
import math
import random
import time
from collections import Counter
from pathlib import Path

from specnego.agents import PaymentMode, PuProfile, SuDemand
from specnego.engine import (
    Failure,
    LatencyModel,
    Scenario,
    Success,
    elapsed_formula,
    run_negotiation,
)
from specnego.evaluation import (
    NegotiationValue,
    classify,
    sweep_num_pus,
    sweep_success_rate,
)
from specnego.protocol import (
    Acceptance,
    AclMessage,
    ChannelRequest,
    Confirmation,
    Performative,
    PriceQuote,
    Refusal,
    pu_id,
    validate_message,
)
from specnego.scenario_io import write_csv, write_trace

DATA = Path(__file__).parent / "data"

REFERENCE_PUS = [(1, 270), (2, 230), (3, 320), (4, 250), (3, 340)]
FAILURE_PUS = [(2, 500), (1, 400), (1, 240), (1, 220), (1, 120)]
SUCCESS_PUS = [(1, 500), (1, 120), (1, 300), (1, 320), (2, 100)]

EXPECTED_COSTS = [5000, 4600, 4200, 3800, 3400, 3000, 2600, 2200, 1800, 1400, 1000]


class Criterion:
    """Collects checks for one criterion and prints a single verdict."""

    def __init__(self, name):
        self.name = name
        self.failures = []

    def check(self, ok, detail):
        if not ok:
            self.failures.append(detail)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None:
            self.failures.append(f"raised {exc_type.__name__}: {exc}")
        verdict = "FAIL" if self.failures else "PASS"
        print(f"[{verdict}] {self.name}")
        if self.failures:
            raise AssertionError(f"{self.name}: " + "; ".join(self.failures))
        return True


def scenario(pairs, nbc):
    return Scenario(
        pus=tuple(
            PuProfile(pu_id(i), free, price)
            for i, (free, price) in enumerate(pairs, 1)
        ),
        demand=SuDemand(nbc),
    )


def best_time(fn, repeats=5):
    """Best wall-clock time over several calls, after one warm-up call."""
    fn()
    best = math.inf
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def random_scenario(rng):
    n = rng.randint(1, 20)
    return scenario(
        [(rng.randint(0, 8), rng.randint(1, 1000)) for _ in range(n)],
        rng.randint(1, 8),
    )


def test_scenario_reproduction():
    with Criterion("scenario reproduction (nbc=1, 3, 5; exact, <1 ms each)") as c:
        s1 = scenario(REFERENCE_PUS, 1)
        outcome1, _ = run_negotiation(s1)
        c.check(
            outcome1.status == Success(pu_id(2), 230, 230),
            f"nbc=1 status {outcome1.status}",
        )
        c.check(outcome1.message_count == 12, f"nbc=1 messages {outcome1.message_count}")

        s2 = scenario(REFERENCE_PUS, 3)
        outcome2, trace2 = run_negotiation(s2)
        c.check(
            outcome2.status == Success(pu_id(4), 250, 250),
            f"nbc=3 status {outcome2.status}",
        )
        replies = [r.performative for r in trace2 if r.performative in
                   (Performative.INFORM, Performative.REFUSE)]
        c.check(
            replies.count(Performative.INFORM) == 3
            and replies.count(Performative.REFUSE) == 2,
            f"nbc=3 replies {replies}",
        )

        s3 = scenario(REFERENCE_PUS, 5)
        outcome3, _ = run_negotiation(s3)
        c.check(outcome3.status == Failure(), f"nbc=5 status {outcome3.status}")
        c.check(outcome3.message_count == 10, f"nbc=5 messages {outcome3.message_count}")

        for label, s in (("nbc=1", s1), ("nbc=3", s2), ("nbc=5", s3)):
            dt = best_time(lambda s=s: run_negotiation(s))
            c.check(dt < 1e-3, f"{label} run took {dt * 1e3:.3f} ms (budget 1 ms)")


def test_cost_table_reproduction():
    with Criterion("cost-vs-success-rate table (exact integers, <1 ms)") as c:
        rows = sweep_success_rate(100, 500, 10)
        c.check(
            [row.success_rate for row in rows] == list(range(0, 101, 10)),
            f"rates {[row.success_rate for row in rows]}",
        )
        c.check(
            [row.total_cost for row in rows] == EXPECTED_COSTS,
            f"costs {[row.total_cost for row in rows]}",
        )
        dt = best_time(lambda: sweep_success_rate(100, 500, 10))
        c.check(dt < 1e-3, f"sweep took {dt * 1e3:.3f} ms (budget 1 ms)")


def test_negotiation_value_classification():
    with Criterion("negotiation-value classification (exact, <1 ms each)") as c:
        s_fail = scenario(FAILURE_PUS, 2)
        outcome_fail, _ = run_negotiation(s_fail)
        c.check(
            classify(outcome_fail, s_fail) is NegotiationValue.REDUNDANT,
            f"redundant dataset classified {classify(outcome_fail, s_fail)}",
        )
        c.check(
            isinstance(outcome_fail.status, Success)
            and outcome_fail.status.amount_paid == 500,
            f"redundant dataset paid {outcome_fail.status}",
        )

        s_succ = scenario(SUCCESS_PUS, 2)
        outcome_succ, _ = run_negotiation(s_succ)
        c.check(
            classify(outcome_succ, s_succ) is NegotiationValue.USEFUL,
            f"useful dataset classified {classify(outcome_succ, s_succ)}",
        )
        c.check(
            isinstance(outcome_succ.status, Success)
            and outcome_succ.status.winner == pu_id(5)
            and outcome_succ.status.amount_paid == 100,
            f"useful dataset outcome {outcome_succ.status}",
        )

        for label, s in (("redundant", s_fail), ("useful", s_succ)):
            dt = best_time(lambda s=s: classify(run_negotiation(s)[0], s))
            c.check(dt < 1e-3, f"{label} took {dt * 1e3:.3f} ms (budget 1 ms)")


def test_response_time_trend():
    with Criterion("response-time trend (monotone, closed form, <10 ms)") as c:
        base = scenario(REFERENCE_PUS, 3)
        rows = sweep_num_pus(base, 5)
        elapsed = [e for _, e in rows]
        c.check(
            all(b > a for a, b in zip(elapsed, elapsed[1:])),
            f"not strictly increasing: {elapsed}",
        )
        increments = {round(b - a, 12) for a, b in zip(elapsed, elapsed[1:])}
        c.check(
            increments == {base.latency.su_proc_delay},
            f"increments {increments} != su_proc_delay {base.latency.su_proc_delay}",
        )
        for n, e in rows:
            want = elapsed_formula(n, base.latency)
            c.check(e == want, f"n={n}: engine {e} != formula {want}")
        dt = best_time(lambda: sweep_num_pus(base, 5), repeats=3)
        c.check(dt < 1e-2, f"sweep took {dt * 1e3:.3f} ms (budget 10 ms)")


def test_oracle_equivalence():
    with Criterion("oracle equivalence (1000 random scenarios, 100%, <1 s)") as c:
        rng = random.Random(2026)
        scenarios = [random_scenario(rng) for _ in range(1000)]
        start = time.perf_counter()
        mismatches = 0
        for s in scenarios:
            outcome, _ = run_negotiation(s)
            feasible = [p for p in s.pus if p.free_channels >= s.demand.nbc]
            if not feasible:
                if not isinstance(outcome.status, Failure):
                    mismatches += 1
                continue
            best = min(feasible, key=lambda p: (p.unit_price, p.id.index))
            ok = (
                isinstance(outcome.status, Success)
                and outcome.status.winner == best.id
                and outcome.status.unit_price == best.unit_price
            )
            if not ok:
                mismatches += 1
        dt = time.perf_counter() - start
        c.check(mismatches == 0, f"{mismatches} of 1000 disagree with brute force")
        c.check(dt < 1.0, f"loop took {dt:.3f} s (budget 1 s)")


_BODY_PARSERS = {
    Performative.REQUEST: ("nbc=", lambda v: ChannelRequest(int(v))),
    Performative.INFORM: ("price=", lambda v: PriceQuote(int(v))),
    Performative.REFUSE: ("available=", lambda v: Refusal(int(v))),
    Performative.CONFIRM: ("amount=", lambda v: Confirmation(int(v))),
    Performative.ACCEPT_PROPOSAL: ("", lambda v: Acceptance()),
}


def rebuild_message(record, msg_id):
    """Reconstruct a full message from its trace record for validation."""
    prefix, make = _BODY_PARSERS[record.performative]
    if not record.body_summary.startswith(prefix):
        raise ValueError(f"bad body summary {record.body_summary!r}")
    return AclMessage(
        msg_id=msg_id,
        conversation_id=1,
        sender=record.sender,
        receiver=record.receiver,
        performative=record.performative,
        body=make(record.body_summary[len(prefix):] or "0"),
        send_time=record.time,
    )


def test_protocol_invariants():
    with Criterion("protocol invariants (1000 random scenarios, 100%, <1 s)") as c:
        rng = random.Random(4051)
        scenarios = [random_scenario(rng) for _ in range(1000)]
        start = time.perf_counter()
        violations = []
        for s in scenarios:
            outcome, trace = run_negotiation(s)
            n = len(s.pus)
            want = 2 * n + 2 if isinstance(outcome.status, Success) else 2 * n
            if outcome.message_count != want or len(trace) != want:
                violations.append(f"count {outcome.message_count} != {want} (N={n})")
                continue
            counts = Counter(r.performative for r in trace)
            closing = 1 if isinstance(outcome.status, Success) else 0
            if (
                counts[Performative.REQUEST] != n
                or counts[Performative.INFORM] + counts[Performative.REFUSE] != n
                or counts[Performative.CONFIRM] != closing
                or counts[Performative.ACCEPT_PROPOSAL] != closing
            ):
                violations.append(f"multiset {dict(counts)} (N={n})")
                continue
            try:
                for k, record in enumerate(trace, 1):
                    validate_message(rebuild_message(record, k))
            except Exception as exc:
                violations.append(f"invalid traced message: {exc}")
        dt = time.perf_counter() - start
        c.check(not violations, f"{len(violations)} violations, first: {violations[:1]}")
        c.check(dt < 1.0, f"loop took {dt:.3f} s (budget 1 s)")


def test_determinism():
    with Criterion("determinism (byte-identical reruns and golden files)") as c:
        s = scenario(REFERENCE_PUS, 1)
        blobs = []
        for _ in range(2):
            _, trace = run_negotiation(s)
            sink = io.BytesIO()
            write_trace(trace, sink)
            blobs.append(sink.getvalue())
        c.check(blobs[0] == blobs[1], "rerun changed the trace bytes")
        golden_trace = (DATA / "trace_nbc1.jsonl").read_bytes()
        c.check(blobs[0] == golden_trace, "trace differs from the golden file")

        tables = []
        for _ in range(2):
            rows = [
                (row.success_rate, row.total_cost)
                for row in sweep_success_rate(100, 500, 10)
            ]
            tables.append(write_csv(["rate", "cost"], rows))
        c.check(tables[0] == tables[1], "rerun changed the CSV")
        golden_csv = (DATA / "cost_table.csv").read_text(encoding="utf-8")
        c.check(tables[0] == golden_csv, "CSV differs from the golden file")

        pus_rows = sweep_num_pus(scenario(REFERENCE_PUS, 3), 5)
        pus_csv = write_csv(["n_pus", "elapsed"], pus_rows)
        c.check(
            pus_csv == "n_pus,elapsed\n1,3.000\n2,3.500\n3,4.000\n4,4.500\n5,5.000\n",
            f"pu-sweep CSV drifted: {pus_csv!r}",
        )
