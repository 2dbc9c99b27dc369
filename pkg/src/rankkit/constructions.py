"""Executable factories for the positive results.

Each factory returns the constructed function or set together with the
artifacts needed to verify it; bundles name the checks that must pass.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .checkers import (
    OneTTReduction,
    TT_CONST_TRUE,
    TT_IDENTITY,
    TT_NEGATION,
    VerifyReport,
    check_1tt,
    check_compression,
    check_ranking,
)
from .compute import BudgetedFn, Outcome, StepMeter, budgeted, native
from .errors import InjectivityError, PreconditionError
from .sets import (
    DEFAULT_BUDGET,
    CoReSet,
    Enumerator,
    NO,
    SetSpec,
    UNKNOWN,
    YES,
    complement,
    join_hat,
    interleave4,
)
from .strings import lex_rank, lex_unrank, pair, to_token, unpair, universe_size


def join_hat_ranker() -> BudgetedFn:
    """Rank the marked union of any set with its complement.

    The empty string is never a member; every other member is some z with
    one marking bit appended, and its rank string is z itself.
    """
    return native("joinhat-ranker", lambda x: x[:-1] if x else "")


def interleave4_compressor() -> BudgetedFn:
    """Collapse the four-phase interleaving onto the whole universe.

    Universe position 4i+p maps to 3i+p for p in {0,1,2} and to 3i+1 for
    p = 3; restricted to members this is injective and onto.
    """

    def fn(x: str) -> str:
        i, phase = divmod(lex_rank(x), 4)
        return lex_unrank(3 * i + (1 if phase == 3 else phase))

    return native("interleave4-compressor", fn)


def recover_via_ranker(g: BudgetedFn) -> BudgetedFn:
    """Decide the original set from a ranker g of its four-phase interleaving.

    The i-th string is in the original set exactly when the ranks g assigns
    at universe positions 4i and 4i+2 differ by two (the in-between slot
    4i+1 is occupied).  Accepts by halting, rejects otherwise; pending
    evaluations of g propagate.
    """

    def raw(x: str, budget: int) -> Outcome:
        i = lex_rank(x)
        meter = StepMeter(budget)
        lo = meter.run(g, lex_unrank(4 * i))
        if not lo.is_halt:
            return Outcome.pending(budget) if lo.is_pending else Outcome.reject(meter.spent)
        hi = meter.run(g, lex_unrank(4 * i + 2))
        if not hi.is_halt:
            return Outcome.pending(budget) if hi.is_pending else Outcome.reject(meter.spent)
        diff = lex_rank(hi.output or "") - lex_rank(lo.output or "")
        if diff == 2:
            return Outcome.halt("1", meter.spent)
        return Outcome.reject(meter.spent)

    return budgeted(f"recover({g.name})", raw)


def re_compressor(enum: Enumerator, name: str | None = None) -> BudgetedFn:
    """Map the i-th enumerated string to the i-th string of the universe.

    Defined exactly on the enumerated strings; an input that never shows up
    stays pending at every budget.  The budget bounds how far into the
    stream one evaluation may look, so outcomes depend only on the stream's
    content, not on what other callers already forced.
    """

    def raw(x: str, budget: int) -> Outcome:
        enum.ensure(budget)
        pos = enum.position(x, 0)
        if pos is not None and pos < budget:
            return Outcome.halt(lex_unrank(pos), pos + 1)
        return Outcome.pending(budget)

    return budgeted(name or f"re-compressor({enum.name})", raw)


def retrace_to_rank(f: BudgetedFn, a0: str, total_mode: bool = False) -> BudgetedFn:
    """Turn a retracing function into a ranking function by chain counting.

    Members chain down to the least member a0; the number of applications
    plus one is the member's rank.  In total mode the chain aborts (with a
    harmless fixed output) as soon as f fails to move a non-a0 string
    strictly down, which certifies the input is off the set.
    """

    def raw(x: str, budget: int) -> Outcome:
        meter = StepMeter(budget)
        meter.charge(1)
        if meter.spent > budget:
            return Outcome.pending(budget)
        if x == a0:
            return Outcome.halt(lex_unrank(0), meter.spent)
        cur = x
        count = 0
        while True:
            if meter.exhausted:
                return Outcome.pending(budget)
            out = meter.run(f, cur)
            if out.is_pending:
                return Outcome.pending(budget)
            if out.is_reject:
                return Outcome.reject(meter.spent)
            nxt = out.output or ""
            count += 1
            if nxt == a0:
                return Outcome.halt(lex_unrank(count), meter.spent)
            if total_mode and lex_rank(nxt) >= lex_rank(cur):
                return Outcome.halt("", meter.spent)
            cur = nxt

    mode = "total" if total_mode else "partial"
    return budgeted(f"retrace-rank({f.name},{to_token(a0)},{mode})", raw)


def inseparable_separator(
    r: OneTTReduction,
    l_a: frozenset[str] | set[str],
    l_b: frozenset[str] | set[str],
) -> BudgetedFn:
    """Total 0/1-valued separator built from a one-query reduction.

    Inputs whose query uses the identity table answer by membership of the
    queried string in the finite table l_a; negation-table inputs answer by
    membership in l_b.  Constant tables need no query: a constant-true
    input is on the accepted side outright.
    """
    la = frozenset(l_a)
    lb = frozenset(l_b)

    def raw(x: str, budget: int) -> Outcome:
        meter = StepMeter(budget)
        tag = r.table_tag(x)
        meter.charge(1)
        if meter.spent > budget:
            return Outcome.pending(budget)
        if tag == TT_CONST_TRUE:
            return Outcome.halt("1", meter.spent)
        if tag == TT_NEGATION or tag == TT_IDENTITY:
            out = meter.run(r.query, x)
            if out.is_pending:
                return Outcome.pending(budget)
            if out.is_reject:
                return Outcome.reject(meter.spent)
            fx = out.output or ""
            if tag == TT_IDENTITY:
                return Outcome.halt("1" if fx in la else "0", meter.spent)
            return Outcome.halt("0" if fx in lb else "1", meter.spent)
        return Outcome.halt("0", meter.spent)  # const-false

    return budgeted(f"separator({r.name})", raw)


@dataclass
class CylinderWitness:
    """A bijection realising cylinder structure on the probed range.

    ``fwd`` carries the ambient set onto the pair-coded cylinder of some
    base set; ``inv`` is its inverse.  Validity is only required where the
    construction actually evaluates it.
    """

    fwd: BudgetedFn
    inv: BudgetedFn
    name: str = "witness"


def identity_witness() -> CylinderWitness:
    ident = native("identity", lambda x: x)
    return CylinderWitness(ident, ident, name="identity")


def mto1_via_cylinder(m: BudgetedFn, witness: CylinderWitness) -> BudgetedFn:
    """Upgrade a many-one reduction into a cylinder to a one-one reduction.

    The input itself pads the cylinder's second coordinate, which forces
    injectivity while membership rides on the first coordinate.
    """

    def raw(z: str, budget: int) -> Outcome:
        meter = StepMeter(budget)
        mz = meter.run(m, z)
        if not mz.is_halt:
            return Outcome.pending(budget) if mz.is_pending else Outcome.reject(meter.spent)
        hz = meter.run(witness.fwd, mz.output or "")
        if not hz.is_halt:
            return Outcome.pending(budget) if hz.is_pending else Outcome.reject(meter.spent)
        base, _pad = unpair(hz.output or "")
        out = meter.run(witness.inv, pair(base, z))
        if not out.is_halt:
            return Outcome.pending(budget) if out.is_pending else Outcome.reject(meter.spent)
        return Outcome.halt(out.output or "", meter.spent)

    return budgeted(f"one-one({m.name};{witness.name})", raw)


@dataclass
class ConstructionBundle:
    """A constructed object plus everything needed to verify it."""

    tag: str
    set: SetSpec | None = None
    fn: BudgetedFn | None = None
    reductions: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    def _resolve_fn(self, key: str | None) -> BudgetedFn:
        if key is None or key == "fn":
            assert self.fn is not None
            return self.fn
        return self.reductions[key]

    def _resolve_set(self, key: str | None) -> SetSpec:
        if key is None or key == "set":
            assert self.set is not None
            return self.set
        return self.sets[key]

    def run_checks(self, budget: int = DEFAULT_BUDGET) -> list[tuple[str, VerifyReport]]:
        results = []
        for spec in self.checks:
            kind = spec["check"]
            if kind == "ranking":
                rep = check_ranking(
                    self._resolve_fn(spec.get("fn")),
                    self._resolve_set(spec.get("set")),
                    spec.get("max_len", 8),
                    spec.get("budget", budget),
                )
            elif kind == "compression":
                rep = check_compression(
                    self._resolve_fn(spec.get("fn")),
                    self._resolve_set(spec.get("set")),
                    spec.get("max_len", 8),
                    spec.get("cover_count", 0),
                    spec.get("budget", budget),
                )
            elif kind == "1tt":
                rep = check_1tt(
                    self.reductions[spec["reduction"]],
                    self._resolve_set(spec.get("set")),
                    self._resolve_set(spec.get("set2")),
                    spec.get("max_len", 8),
                    spec.get("budget", budget),
                )
            else:
                raise ValueError(f"unknown check kind {kind!r}")
            results.append((spec.get("label", kind), rep))
        return results


class LASet(SetSpec):
    """Pairs tying each string to its status in a co-r.e. set.

    A pair (x, s) is in when s is empty and x is in the underlying set, or
    when s is the i-th nonempty universe string and x is the i-th string
    the complement enumerator emits.  Every x occurs with exactly one
    second coordinate.
    """

    def __init__(self, a: CoReSet):
        self.a = a
        self.enum = a.comp_enum
        self.name = f"L({a.describe()})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        first, second = unpair(x)
        if second == "":
            return self.a.member(first, budget)
        i = lex_rank(second)  # >= 1
        got = self.enum.get(i - 1) if i <= max(budget, self.enum.snapshot_count()) else None
        if got is not None:
            return YES if got == first else NO
        if self.enum.exhausted:
            return NO
        return UNKNOWN


def lA_construction(
    a: SetSpec,
    x0: str,
    x1: str,
    budget: int = DEFAULT_BUDGET,
    witness: CylinderWitness | None = None,
) -> ConstructionBundle:
    """Compress a co-r.e. set by tagging strings with enumeration evidence.

    Requires a complement-enumerator presentation, a resolvable member x0
    and a resolvable non-member x1.  The bundle carries: the tagged set, its
    first-coordinate projection compressor, the one-one reduction into the
    tagged set, and the many-one reduction back.  With a cylinder witness
    the many-one reduction is upgraded to a one-one reduction as well.
    """
    if not isinstance(a, CoReSet):
        raise PreconditionError("lA_construction needs a complement-enumerator presentation")
    if a.member(x0, budget) != YES:
        raise PreconditionError(f"x0 = {to_token(x0)} not certified inside the set")
    if a.member(x1, budget) != NO:
        raise PreconditionError(f"x1 = {to_token(x1)} not certified outside the set")

    la = LASet(a)
    projection = native("project-first", lambda z: unpair(z)[0])
    one_one_fwd = native("tag-with-eps", lambda x: pair(x, ""))
    enum = a.comp_enum

    def back_raw(z: str, budget_: int) -> Outcome:
        first, second = unpair(z)
        if second == "":
            return Outcome.halt(first, 1) if budget_ >= 1 else Outcome.pending(budget_)
        i = lex_rank(second)
        if i > budget_:
            return Outcome.pending(budget_)
        enum.ensure(i)
        got = enum.get(i - 1)
        if got is None and not enum.exhausted:
            return Outcome.pending(budget_)
        hit = got == first
        return Outcome.halt(x0 if hit else x1, min(i, budget_))

    many_one_back = budgeted(f"untag({la.name})", back_raw)
    reductions = {"one_one_fwd": one_one_fwd, "many_one_back": many_one_back}
    if witness is not None:
        reductions["one_one_back"] = mto1_via_cylinder(many_one_back, witness)

    return ConstructionBundle(
        tag="beta1",
        set=la,
        fn=projection,
        reductions=reductions,
        sets={"base": a},
        checks=[
            {"check": "compression", "max_len": 8, "cover_count": 4, "budget": budget},
        ],
        provenance={"x0": to_token(x0), "x1": to_token(x1)},
    )


def myhill_isomorphism(
    f: BudgetedFn,
    g: BudgetedFn,
    n: int,
    budget: int = DEFAULT_BUDGET,
) -> dict[str, str]:
    """Back-and-forth merge of two one-one reductions into a bijection table.

    Alternates f-chains (to give each of the first n strings an image) and
    g-chains (to give each of the first n strings a preimage); unmatched
    elements are taken shortlex-first, so the result is deterministic.
    Raises InjectivityError with a witness if either map is caught mapping
    two inputs to one output, and PreconditionError if an evaluation fails
    to halt within the budget.
    """
    h: dict[str, str] = {}
    hinv: dict[str, str] = {}
    f_seen: dict[str, str] = {}
    g_seen: dict[str, str] = {}

    def evaluate(fn: BudgetedFn, x: str, seen: dict[str, str], label: str) -> str:
        out = fn.run(x, budget)
        if not out.is_halt:
            raise PreconditionError(
                f"{label} did not halt on {to_token(x)} within budget {budget}"
            )
        y = out.output or ""
        prev = seen.get(y)
        if prev is not None and prev != x:
            raise InjectivityError(
                f"{label} is not one-to-one",
                witness={"first": to_token(prev), "second": to_token(x), "output": to_token(y)},
            )
        seen[y] = x
        return y

    for t in range(n):
        x = lex_unrank(t)
        if x not in h:
            cur = x
            guard = {cur}
            y = evaluate(f, cur, f_seen, "forward map")
            while y in hinv:
                cur = hinv[y]
                if cur in guard:
                    raise InjectivityError(
                        "forward chain cycled", witness={"string": to_token(cur)}
                    )
                guard.add(cur)
                y = evaluate(f, cur, f_seen, "forward map")
            h[x] = y
            hinv[y] = x
        y0 = lex_unrank(t)
        if y0 not in hinv:
            cur = y0
            guard = {cur}
            u = evaluate(g, cur, g_seen, "backward map")
            while u in h:
                cur = h[u]
                if cur in guard:
                    raise InjectivityError(
                        "backward chain cycled", witness={"string": to_token(cur)}
                    )
                guard.add(cur)
                u = evaluate(g, cur, g_seen, "backward map")
            h[u] = y0
            hinv[y0] = u
    return h


def bundle_thm103(s: SetSpec, max_len: int = 12, budget: int = DEFAULT_BUDGET) -> ConstructionBundle:
    """Marked union of a set with its complement, plus its ranker."""
    joined = join_hat(s, complement(s))
    return ConstructionBundle(
        tag="thm103",
        set=joined,
        fn=join_hat_ranker(),
        checks=[{"check": "ranking", "max_len": max_len, "budget": budget}],
    )


def thm123_forward_reduction() -> OneTTReduction:
    query = native("stretch4+1", lambda x: lex_unrank(4 * lex_rank(x) + 1))
    return OneTTReduction(query, TT_IDENTITY, name="into-interleaving")


def thm123_backward_reduction() -> OneTTReduction:
    def query(x: str) -> str:
        return lex_unrank(lex_rank(x) // 4)

    def table(x: str) -> str:
        phase = lex_rank(x) % 4
        if phase in (0, 2):
            return TT_CONST_TRUE
        return TT_IDENTITY if phase == 1 else TT_NEGATION

    return OneTTReduction(native("collapse4", query), table, name="out-of-interleaving")


def bundle_thm123(a: SetSpec, max_len: int = 12, budget: int = DEFAULT_BUDGET) -> ConstructionBundle:
    """Four-phase interleaving with its compressor and both reductions."""
    b = interleave4(a)
    cover = 3 * (universe_size(max_len) // 4)
    return ConstructionBundle(
        tag="thm123",
        set=b,
        fn=interleave4_compressor(),
        sets={"base": a},
        reductions={"fwd": thm123_forward_reduction(), "back": thm123_backward_reduction()},
        checks=[
            {"check": "compression", "max_len": max_len, "cover_count": cover, "budget": budget},
            {
                "check": "1tt",
                "reduction": "fwd",
                "set": "base",
                "set2": "set",
                "max_len": max(2, max_len - 2),
                "budget": budget,
                "label": "1tt-forward",
            },
            {
                "check": "1tt",
                "reduction": "back",
                "set": "set",
                "set2": "base",
                "max_len": max(2, max_len - 2),
                "budget": budget,
                "label": "1tt-backward",
            },
        ],
    )
