"""Decision procedures built on rankers, and the anti-compression stage construction.

The deciders implement textbook-style procedures under explicit step
budgets.  Premises (that a supplied ranker really ranks, that enumerators
really enumerate what they claim) are trusted but opportunistically
monitored: observed contradictions raise :class:`PremiseViolation` rather
than being laundered into an answer.

``diagonalize`` runs the stage construction that defeats each candidate
function as a compressor of the set being built.  The unbounded
existential searches of the ideal construction become bounded scans; a
stage that cannot certify any case within its budget is logged as
inconclusive (it still grows the set and advances the freeze frontier, so
the state invariants are unconditional).
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Sequence

from .checkers import INCONCLUSIVE, PASS, REFUTED, VerifyReport
from .compute import BudgetedFn, Outcome, StepMeter
from .errors import PremiseViolation
from .sets import Enumerator
from .strings import from_token, lex_rank, lex_unrank, successor, to_token

ACCEPT = "accept"
REJECT = "reject"


@dataclass
class DecisionRecord:
    answer: str
    clause: str
    witness: dict
    steps: int

    @property
    def accepted(self) -> bool:
        return self.answer == ACCEPT

    def to_json_dict(self) -> dict:
        return {
            "answer": self.answer,
            "clause": self.clause,
            "witness": self.witness,
            "steps": self.steps,
        }


class _RankLedger:
    """Tracks (member, rank) observations around a query string.

    Detects premise violations (shared ranks, rank order disagreeing with
    string order) and reports the two decisive events: a rank-zero witness
    above the query, and a consecutive-rank bracket around it.
    """

    def __init__(self, x: str):
        self.x = x
        self.xr = lex_rank(x)
        self._by_string: list[tuple[int, int]] = []  # (string rank, value rank)
        self._outputs: dict[int, str] = {}
        self.lower: tuple[int, int, str] | None = None
        self.upper: tuple[int, int, str] | None = None

    def observe(self, s: str, value: str) -> tuple[str, dict] | None:
        sr = lex_rank(s)
        vr = lex_rank(value)
        prev = self._outputs.get(vr)
        if prev is not None and prev != s:
            raise PremiseViolation(
                "two strings were assigned the same rank",
                {"first": to_token(prev), "second": to_token(s), "rank": to_token(value)},
            )
        self._outputs[vr] = s
        entry = (sr, vr)
        pos = bisect.bisect_left(self._by_string, entry)
        for neighbor in (pos - 1, pos):
            if 0 <= neighbor < len(self._by_string):
                nsr, nvr = self._by_string[neighbor]
                if (nsr < sr) != (nvr < vr):
                    raise PremiseViolation(
                        "rank order disagrees with string order",
                        {
                            "first": to_token(lex_unrank(min(nsr, sr))),
                            "second": to_token(lex_unrank(max(nsr, sr))),
                        },
                    )
        self._by_string.insert(pos, entry)
        if sr > self.xr and vr == 0:
            return "eps-witness", {"above": to_token(s)}
        if sr < self.xr:
            if self.lower is None or sr > self.lower[0]:
                self.lower = (sr, vr, s)
        elif sr > self.xr:
            if self.upper is None or sr < self.upper[0]:
                self.upper = (sr, vr, s)
        if self.lower and self.upper and self.upper[1] == self.lower[1] + 1:
            return "bracket", {
                "below": to_token(self.lower[2]),
                "above": to_token(self.upper[2]),
            }
        return None


def decide_re_with_ranker(
    enum: Enumerator,
    f: BudgetedFn,
    x: str,
    budget: int,
) -> DecisionRecord:
    """Decide membership given an enumerator of the set and a ranker for it.

    Interleaves enumeration with rank evaluations and returns on the first
    decisive event: the query string is enumerated (accept); a string above
    the query ranks first in the set, or a consecutive-rank pair brackets
    the query (reject).
    """
    meter = StepMeter(budget)
    ledger = _RankLedger(x)
    pos = 0
    while not meter.exhausted:
        e = enum.get(pos)
        meter.charge(1)
        if e is None:
            return DecisionRecord(
                INCONCLUSIVE, "enumerator-exhausted", {"emitted": pos}, meter.spent
            )
        pos += 1
        out = meter.run(f, e)
        if out.is_pending:
            break
        if out.is_reject:
            raise PremiseViolation(
                "ranker rejected an enumerated member", {"string": to_token(e)}
            )
        if e == x:
            return DecisionRecord(
                ACCEPT, "enumerated", {"string": to_token(x)}, meter.spent
            )
        event = ledger.observe(e, out.output or "")
        if event is not None:
            clause, witness = event
            return DecisionRecord(REJECT, clause, witness, meter.spent)
    return DecisionRecord(INCONCLUSIVE, "budget", {}, meter.spent)


def totalize_ranker(
    f: BudgetedFn,
    comp_enum: Enumerator,
    fallback: str = "101010",
    name: str | None = None,
) -> BudgetedFn:
    """Race a partial ranker against an enumerator of the complement.

    On each input the complement stream and the ranker are advanced in
    doubling rounds until one wins; a complement sighting yields the fixed
    fallback value, a ranker value is passed through.  Total whenever, for
    each input, one side eventually fires.
    """

    def raw(x: str, budget: int) -> Outcome:
        meter = StepMeter(budget)
        k = 1
        while not meter.exhausted:
            cached = comp_enum.ensure(k)
            meter.charge(cached if (comp_enum.exhausted and cached < k) else k)
            p = comp_enum.position(x, 0)
            if p is not None and p < k:
                return Outcome.halt(fallback, min(meter.spent, budget))
            if meter.exhausted:
                break
            out = f.run(x, min(k, meter.remaining))
            meter.charge(out.steps)
            if out.is_halt:
                return Outcome.halt(out.output or "", min(meter.spent, budget))
            k *= 2
        return Outcome.pending(budget)

    return BudgetedFn(name or f"totalized({f.name})", raw, kind="derived")


def decide_core_with_subset(
    comp_enum: Enumerator,
    subset_enum: Enumerator,
    g: BudgetedFn,
    x: str,
    budget: int,
) -> DecisionRecord:
    """Decide a co-r.e. set given a total ranker and an infinite enumerable subset.

    Finds a subset member above the query, reads off its rank, deduces how
    many complement strings sit at or below it, collects exactly that many
    from the complement enumerator, and answers by whether the query is
    among them.
    """
    meter = StepMeter(budget)
    xr = lex_rank(x)
    s_n: str | None = None
    pos = 0
    while not meter.exhausted:
        e = subset_enum.get(pos)
        meter.charge(1)
        if e is None:
            raise PremiseViolation(
                "subset enumerator ended; an infinite subset was promised",
                {"emitted": pos},
            )
        pos += 1
        if lex_rank(e) > xr:
            s_n = e
            break
    if s_n is None:
        return DecisionRecord(INCONCLUSIVE, "budget", {}, meter.spent)
    n = lex_rank(s_n)
    out = meter.run(g, s_n)
    if out.is_pending:
        return DecisionRecord(INCONCLUSIVE, "budget", {"at": to_token(s_n)}, meter.spent)
    if out.is_reject:
        raise PremiseViolation("ranker rejected a subset member", {"string": to_token(s_n)})
    need = n - lex_rank(out.output or "")
    if need < 0:
        raise PremiseViolation(
            "rank exceeds the universe position of the ranked string",
            {"string": to_token(s_n), "rank": to_token(out.output or "")},
        )
    collected: set[str] = set()
    pos = 0
    exhausted = False
    while len(collected) < need and not meter.exhausted:
        e = comp_enum.get(pos)
        meter.charge(1)
        if e is None:
            exhausted = True
            break
        pos += 1
        if lex_rank(e) <= n:
            collected.add(e)
    if exhausted and len(collected) < need:
        raise PremiseViolation(
            "complement enumerator ended before listing the deduced count",
            {"needed": need, "found": len(collected), "below": to_token(s_n)},
        )
    if len(collected) < need:
        return DecisionRecord(INCONCLUSIVE, "budget", {}, meter.spent)
    if comp_enum.exhausted:
        surplus = sum(1 for e in comp_enum.emitted() if lex_rank(e) <= n)
        if surplus > need:
            raise PremiseViolation(
                "complement lists more strings below the anchor than the rank allows",
                {"needed": need, "found": surplus, "below": to_token(s_n)},
            )
    if x in collected:
        return DecisionRecord(
            REJECT, "complement-listed", {"string": to_token(x), "below": to_token(s_n)}, meter.spent
        )
    return DecisionRecord(
        ACCEPT,
        "complement-exhausted-below",
        {"anchor": to_token(s_n), "complement_count": need},
        meter.spent,
    )


def variant_a_decider(f: BudgetedFn, x: str, budget: int) -> DecisionRecord:
    """Decide membership from a ranker that never lies on non-members.

    Dovetails f over the whole universe.  First applicable clause wins:
    f halts on the query (accept); f rejects the query (reject); some
    string above the query ranks first (reject); a consecutive-rank pair
    brackets the query (reject).
    """
    meter = StepMeter(budget)
    ledger = _RankLedger(x)
    pending: list[int] = []
    included = 0
    r = 0
    while not meter.exhausted:
        r += 1
        attempts = list(pending)
        if included < r:
            attempts.append(included)
            included += 1
        pending = []
        for p in attempts:
            if meter.exhausted:
                pending.append(p)
                continue
            s = lex_unrank(p)
            out = f.run(s, r)
            meter.charge(out.steps)
            if out.is_pending:
                pending.append(p)
                continue
            if s == x:
                if out.is_halt:
                    return DecisionRecord(
                        ACCEPT, "self-halt", {"rank": to_token(out.output or "")}, meter.spent
                    )
                return DecisionRecord(REJECT, "self-reject", {}, meter.spent)
            if out.is_halt:
                event = ledger.observe(s, out.output or "")
                if event is not None:
                    clause, witness = event
                    return DecisionRecord(REJECT, clause, witness, meter.spent)
        pending.sort()
    return DecisionRecord(INCONCLUSIVE, "budget", {}, meter.spent)


@dataclass
class StageRecord:
    stage: int
    case: str
    witness: dict
    added: list[str]
    frontier: str
    scanned_from: str = ""
    horizon: int = 0

    def to_json_dict(self) -> dict:
        return {
            "case": self.case,
            "witness": self.witness,
            "added": [to_token(s) for s in self.added],
            "frontier": to_token(self.frontier),
        }


@dataclass
class StageState:
    stages: list[StageRecord] = field(default_factory=list)
    members: set[str] = field(default_factory=set)
    frontier: str = ""

    def to_json_dict(self) -> dict:
        return {
            "stages": [r.to_json_dict() for r in self.stages],
            "members": [to_token(s) for s in sorted(self.members, key=lex_rank)],
        }


COLLISION = "collision"
HOLE = "hole"
FINITE_DOMAIN = "finite-domain"
STAGE_INCONCLUSIVE = "inconclusive"


def _budgeted_scan(
    phi: BudgetedFn, scope: Sequence[str], total_budget: int
) -> dict[str, Outcome]:
    """Evaluate phi across the scope under one shared step allotment.

    Doubling per-string budgets spread the allotment so that cheap halts
    are all observed before any single divergent input can drain the
    stage.  Unattempted strings keep a zero-step pending outcome.
    """
    outcomes: dict[str, Outcome] = {s: Outcome.pending(0) for s in scope}
    unresolved = list(scope)
    spent = 0
    b = 1
    while unresolved and spent < total_budget:
        still: list[str] = []
        for i, s in enumerate(unresolved):
            if spent >= total_budget:
                still.extend(unresolved[i:])
                break
            out = phi.run(s, b)
            spent += out.steps
            outcomes[s] = out
            if not out.resolved:
                still.append(s)
        unresolved = still
        b *= 2
    return outcomes


def _select_case(
    scope: Sequence[str], outcomes: dict[str, Outcome], frontier_rank: int
) -> tuple[str, dict]:
    first_output: dict[str, str] = {}
    hole_at: str | None = None
    pending = 0
    first_pending: str | None = None
    collision: tuple[str, str, str] | None = None
    for s in scope:
        out = outcomes[s]
        if out.is_pending:
            pending += 1
            if first_pending is None:
                first_pending = s
            continue
        if not out.is_halt:
            continue
        y = out.output or ""
        if collision is None:
            if y in first_output:
                collision = (first_output[y], s, y)
            else:
                first_output[y] = s
        if hole_at is None and lex_rank(s) >= frontier_rank:
            hole_at = s
    if collision is not None:
        x, y, output = collision
        return COLLISION, {"x": to_token(x), "y": to_token(y), "output": to_token(output)}
    if hole_at is not None:
        return HOLE, {
            "x": to_token(hole_at),
            "output": to_token(outcomes[hole_at].output or ""),
        }
    if pending == 0:
        return FINITE_DOMAIN, {"scanned": len(scope)}
    return STAGE_INCONCLUSIVE, {
        "pending": pending,
        "first_pending": to_token(first_pending or ""),
    }


def diagonalize(
    candidates: Sequence[BudgetedFn],
    stage_budget: int,
    search_horizon: int,
) -> StageState:
    """Build a finite stage state defeating each candidate as a compressor.

    Stage i scans the committed members plus a horizon of strings above the
    freeze frontier.  A collision pair kills injectivity; failing that, the
    least string above the frontier where the candidate halts is frozen out
    of the set, leaving its image unwitnessed; failing that, a fully
    rejecting scan certifies the candidate's domain misses the horizon.
    Every stage, certified or not, adds at least one string and advances
    the frontier, so membership below the frontier never changes later.
    """
    state = StageState()
    members = state.members
    w = ""
    for idx, phi in enumerate(candidates, start=1):
        w_rank = lex_rank(w)
        scope = sorted(members, key=lex_rank)
        scope.extend(lex_unrank(w_rank + t) for t in range(search_horizon))
        outcomes = _budgeted_scan(phi, scope, stage_budget)
        case, witness = _select_case(scope, outcomes, w_rank)
        if case == COLLISION:
            x = from_token(witness["x"])
            y = from_token(witness["y"])
            added = sorted({x, y, w} - members, key=lex_rank)
            new_w = successor(max((x, y, w), key=lex_rank))
        elif case == HOLE:
            xh = from_token(witness["x"])
            added = [successor(xh)]
            new_w = successor(successor(xh))
        else:
            witness = dict(witness, scanned_from=to_token(w), horizon=search_horizon)
            added = [w]
            new_w = successor(w)
        # members always sit strictly below the frontier, so w itself is fresh
        assert added, "every stage must grow the set"
        for s in added:
            assert lex_rank(s) >= w_rank, "stage touched the frozen region"
        assert lex_rank(new_w) > w_rank, "frontier must advance"
        members.update(added)
        state.stages.append(
            StageRecord(idx, case, witness, added, new_w, scanned_from=w, horizon=search_horizon)
        )
        w = new_w
    state.frontier = w
    return state


def audit_diagonal(
    state: StageState,
    candidates: Sequence[BudgetedFn],
    budget: int,
) -> VerifyReport:
    """Independently re-verify every certified stage of a diagonalization.

    Collision stages must show two committed members sharing an output;
    hole stages must show a halted string frozen out of the set whose
    output no committed member reaches within the budget; finite-domain
    stages are rescanned fresh.  Structural invariants (growth, frontier
    monotonicity, no edits below the frontier) are checked for all stages.
    """
    if len(state.stages) > len(candidates):
        return VerifyReport(REFUTED, {"reason": "more stages than candidates"}, 0, 0)
    rebuilt: set[str] = set()
    prev_frontier = ""
    examined = 0
    steps = 0
    members_sorted = sorted(state.members, key=lex_rank)
    for rec, phi in zip(state.stages, candidates):
        examined += 1

        def fail(reason: str, **extra) -> VerifyReport:
            return VerifyReport(
                REFUTED, {"stage": rec.stage, "reason": reason, **extra}, examined, steps
            )

        if not rec.added:
            return fail("stage added nothing")
        if lex_rank(rec.frontier) <= lex_rank(prev_frontier):
            return fail("frontier did not advance")
        for s in rec.added:
            if lex_rank(s) < lex_rank(prev_frontier):
                return fail("stage edited the frozen region", string=to_token(s))
        rebuilt.update(rec.added)
        if rec.case == COLLISION:
            x = from_token(rec.witness["x"])
            y = from_token(rec.witness["y"])
            if x == y:
                return fail("collision witness is a single string")
            if x not in rebuilt or y not in rebuilt or x not in state.members or y not in state.members:
                return fail("collision witness not committed")
            ox = phi.run(x, budget)
            oy = phi.run(y, budget)
            steps += ox.steps + oy.steps
            if not (ox.is_halt and oy.is_halt and ox.output == oy.output):
                return fail("collision outputs did not reproduce")
            if ox.output != from_token(rec.witness["output"]):
                return fail("collision output changed")
        elif rec.case == HOLE:
            x = from_token(rec.witness["x"])
            target = from_token(rec.witness["output"])
            if x in state.members:
                return fail("hole witness was committed into the set")
            if lex_rank(x) >= lex_rank(rec.frontier):
                return fail("hole witness is not frozen")
            ox = phi.run(x, budget)
            steps += ox.steps
            if not (ox.is_halt and ox.output == target):
                return fail("hole evaluation did not reproduce")
            for a in members_sorted:
                oa = phi.run(a, budget)
                steps += oa.steps
                if oa.is_halt and oa.output == target:
                    return fail("a committed member reaches the hole target", member=to_token(a))
        elif rec.case == FINITE_DOMAIN:
            scope = sorted(rebuilt - set(rec.added), key=lex_rank)
            start = lex_rank(rec.scanned_from)
            scope.extend(lex_unrank(start + t) for t in range(rec.horizon))
            outcomes = _budgeted_scan(phi, scope, budget)
            steps += sum(o.steps for o in outcomes.values())
            for s, out in outcomes.items():
                if out.is_halt:
                    return fail("a halt appeared inside the scanned horizon", string=to_token(s))
        prev_frontier = rec.frontier
    if rebuilt != state.members:
        return VerifyReport(
            REFUTED, {"reason": "member set does not match stage additions"}, examined, steps
        )
    return VerifyReport(PASS, None, examined, steps)
