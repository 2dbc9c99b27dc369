"""Ground-truth oracles and refutation engines.

``check_ranking`` and ``check_compression`` audit a candidate function
against a set presentation on an exhaustive shortlex prefix.  They refute
with a re-checkable witness, pass provisionally, or report inconclusive
when some needed membership or evaluation stayed unresolved at the given
budget.  Surjectivity can never be refuted at finite scale, so the
compression checker only records which early targets went unwitnessed.

Rank values are encoded as strings: a member that is the c-th member of
the set (1-based) should map to the string of shortlex rank c - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

from .compute import BudgetedFn, DIVERGE, REJECT, native
from .sets import DEFAULT_BUDGET, NO, UNKNOWN, YES, SetSpec
from .strings import lex_rank, lex_unrank, strings_up_to, to_token

PASS = "pass"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass
class VerifyReport:
    verdict: str
    witness: dict | None = None
    examined: int = 0
    steps: int = 0
    cover: dict | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    @property
    def refuted(self) -> bool:
        return self.verdict == REFUTED

    def to_json_dict(self) -> dict:
        d = {
            "verdict": self.verdict,
            "witness": self.witness,
            "examined": self.examined,
            "steps": self.steps,
        }
        if self.cover is not None:
            d["cover"] = self.cover
        return d


class RankOracle:
    """Incremental brute-force ranks for a set presentation.

    Counts members along the shortlex order, caching the cumulative count
    per universe position.  Counting stops at the first unresolved
    membership; queries beyond that point return None until the
    presentation can resolve it.
    """

    def __init__(self, s: SetSpec, budget: int = DEFAULT_BUDGET):
        self.set = s
        self.budget = budget
        self._cum: list[int] = []  # cum[i] = members among ranks 0..i

    def _extend_to(self, n: int) -> bool:
        while len(self._cum) <= n:
            i = len(self._cum)
            m = self.set.member(lex_unrank(i), self.budget)
            if m == UNKNOWN:
                return False
            prev = self._cum[i - 1] if i else 0
            self._cum.append(prev + (1 if m == YES else 0))
        return True

    def count_through(self, x: str) -> int | None:
        """Cardinality of the set restricted to strings <= x, or None."""
        n = lex_rank(x)
        if not self._extend_to(n):
            return None
        return self._cum[n]

    def membership(self, x: str) -> str:
        return self.set.member(x, self.budget)

    def rank_string(self, x: str) -> str | None:
        """The rank value a correct ranking function must output at member x."""
        c = self.count_through(x)
        if c is None or c == 0:
            return None
        return lex_unrank(c - 1)


def true_rank(a: SetSpec, x: str, budget: int = DEFAULT_BUDGET) -> int | None:
    """1-based count of members at or below x; None if anything is unresolved."""
    return RankOracle(a, budget).count_through(x)


def oracle_ranker(
    a: SetSpec,
    budget: int = DEFAULT_BUDGET,
    nonmember: str = "count",
    name: str | None = None,
) -> BudgetedFn:
    """A native ranking function computed by brute-force counting.

    ``nonmember`` fixes the behaviour off the set: "count" outputs the
    running member count (a total function), "reject" halts rejecting,
    "diverge" never halts.  Unresolved memberships always diverge.
    """
    if nonmember not in ("count", "reject", "diverge"):
        raise ValueError(f"unknown nonmember mode {nonmember!r}")
    oracle = RankOracle(a, budget)

    def fn(x: str):
        c = oracle.count_through(x)
        if c is None:
            return DIVERGE
        if oracle.membership(x) == YES:
            return lex_unrank(c - 1)
        if nonmember == "count":
            return lex_unrank(c - 1) if c else ""
        return REJECT if nonmember == "reject" else DIVERGE

    return native(name or f"oracle-rank({a.describe()},{nonmember})", fn)


def check_ranking(
    f: BudgetedFn,
    a: SetSpec,
    max_len: int,
    budget: int = DEFAULT_BUDGET,
) -> VerifyReport:
    """Audit f as a ranking function for a on all strings of length <= max_len.

    Members must evaluate to exactly their rank string; behaviour off the
    set is ignored.  The reported refutation is the shortlex-least
    certified violation.
    """
    examined = 0
    steps = 0
    count = 0
    unresolved: dict | None = None
    for x in strings_up_to(max_len):
        examined += 1
        m = a.member(x, budget)
        if m == UNKNOWN:
            # ranks of every later member depend on this string; stop here
            if unresolved is None:
                unresolved = {"clause": "membership-unresolved", "string": to_token(x)}
            break
        if m == NO:
            continue
        count += 1
        expected = lex_unrank(count - 1)
        out = f.run(x, budget)
        steps += out.steps
        if out.is_pending:
            if unresolved is None:
                unresolved = {"clause": "evaluation-pending", "string": to_token(x)}
            continue
        if out.is_reject:
            return VerifyReport(
                REFUTED,
                {"clause": "domain", "string": to_token(x), "expected": to_token(expected)},
                examined,
                steps,
            )
        if out.output != expected:
            return VerifyReport(
                REFUTED,
                {
                    "clause": "rank-mismatch",
                    "string": to_token(x),
                    "got": to_token(out.output or ""),
                    "expected": to_token(expected),
                },
                examined,
                steps,
            )
    if unresolved is not None:
        return VerifyReport(INCONCLUSIVE, unresolved, examined, steps)
    return VerifyReport(PASS, None, examined, steps)


def check_compression(
    f: BudgetedFn,
    a: SetSpec,
    max_len: int,
    cover_count: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> VerifyReport:
    """Audit f as a compression function for a on the given prefix.

    Refutes only on a member where f fails to halt with an output, or on
    two members colliding.  The cover audit records which of the first
    ``cover_count`` universe strings were hit by some member of the
    prefix; missing targets are reported, never refuted.
    """
    examined = 0
    steps = 0
    seen: dict[str, str] = {}
    covered: set[int] = set()
    unresolved: dict | None = None
    for x in strings_up_to(max_len):
        examined += 1
        m = a.member(x, budget)
        if m == UNKNOWN:
            if unresolved is None:
                unresolved = {"clause": "membership-unresolved", "string": to_token(x)}
            continue
        if m == NO:
            continue
        out = f.run(x, budget)
        steps += out.steps
        if out.is_pending:
            if unresolved is None:
                unresolved = {"clause": "evaluation-pending", "string": to_token(x)}
            continue
        if out.is_reject:
            return VerifyReport(
                REFUTED,
                {"clause": "domain", "string": to_token(x)},
                examined,
                steps,
            )
        y = out.output or ""
        if y in seen:
            return VerifyReport(
                REFUTED,
                {
                    "clause": "collision",
                    "first": to_token(seen[y]),
                    "second": to_token(x),
                    "output": to_token(y),
                },
                examined,
                steps,
            )
        seen[y] = x
        r = lex_rank(y)
        if r < cover_count:
            covered.add(r)
    cover = {
        "targets": cover_count,
        "hit": len(covered),
        "unwitnessed": [to_token(lex_unrank(i)) for i in range(cover_count) if i not in covered],
    }
    if unresolved is not None:
        return VerifyReport(INCONCLUSIVE, unresolved, examined, steps, cover)
    return VerifyReport(PASS, None, examined, steps, cover)


TT_IDENTITY = "identity"
TT_NEGATION = "negation"
TT_CONST_TRUE = "const-true"
TT_CONST_FALSE = "const-false"
_TT_TAGS = (TT_IDENTITY, TT_NEGATION, TT_CONST_TRUE, TT_CONST_FALSE)


@dataclass
class OneTTReduction:
    """A reduction making at most one oracle query per input.

    ``table`` is either a fixed truth-table tag or a per-input map from the
    input to a tag.  Constant tags use no query at all.
    """

    query: BudgetedFn
    table: Union[str, Callable[[str], str]] = TT_IDENTITY
    name: str = "1tt"

    def table_tag(self, x: str) -> str:
        tag = self.table if isinstance(self.table, str) else self.table(x)
        if tag not in _TT_TAGS:
            raise ValueError(f"unknown truth-table tag {tag!r}")
        return tag


def _apply_table(tag: str, b: str) -> str:
    if tag == TT_CONST_TRUE:
        return YES
    if tag == TT_CONST_FALSE:
        return NO
    if tag == TT_IDENTITY:
        return b
    if b == YES:
        return NO
    if b == NO:
        return YES
    return UNKNOWN


def check_1tt(
    r: OneTTReduction,
    a: SetSpec,
    b: SetSpec,
    max_len: int,
    budget: int = DEFAULT_BUDGET,
) -> VerifyReport:
    """Audit that membership in a matches the reduction's answer via b."""
    examined = 0
    steps = 0
    unresolved: dict | None = None
    for x in strings_up_to(max_len):
        examined += 1
        lhs = a.member(x, budget)
        tag = r.table_tag(x)
        if tag in (TT_CONST_TRUE, TT_CONST_FALSE):
            rhs = _apply_table(tag, UNKNOWN)
            q_tok = None
        else:
            out = r.query.run(x, budget)
            steps += out.steps
            if not out.is_halt:
                if unresolved is None:
                    unresolved = {"clause": "query-unresolved", "string": to_token(x)}
                continue
            q = out.output or ""
            q_tok = to_token(q)
            rhs = _apply_table(tag, b.member(q, budget))
        if lhs == UNKNOWN or rhs == UNKNOWN:
            if unresolved is None:
                unresolved = {"clause": "membership-unresolved", "string": to_token(x)}
            continue
        if lhs != rhs:
            return VerifyReport(
                REFUTED,
                {
                    "clause": "answer-mismatch",
                    "string": to_token(x),
                    "query": q_tok,
                    "table": tag,
                    "lhs": lhs,
                    "rhs": rhs,
                },
                examined,
                steps,
            )
    if unresolved is not None:
        return VerifyReport(INCONCLUSIVE, unresolved, examined, steps)
    return VerifyReport(PASS, None, examined, steps)
