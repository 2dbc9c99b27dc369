"""Set presentations with three-valued, budget-monotone membership.

A :class:`SetSpec` answers membership queries with "yes", "no", or
"unknown".  Answers are sound (a yes/no is true of the ideal set) and can
only improve as the budget grows.  Decidable presentations (finite tables,
total predicates) never answer unknown within their declared budget;
enumerator-backed presentations narrow as the stream is consumed, and a
stream that finishes resolves everything it left unsaid.

For enumerator-backed presentations the budget counts stream positions
examined, which keeps query outcomes independent of whatever is already
cached for other callers.
"""

from __future__ import annotations

import threading
from typing import Callable, Iterable, Iterator

from .compute import BudgetedFn, REJECT, native
from .machines import interpret, program_at
from .strings import (
    lex_rank,
    lex_unrank,
    shortlex_key,
    strings,
    to_token,
    unpair,
)

YES = "yes"
NO = "no"
UNKNOWN = "unknown"

DEFAULT_BUDGET = 100_000


def negate(m: str) -> str:
    if m == YES:
        return NO
    if m == NO:
        return YES
    return UNKNOWN


class Enumerator:
    """A resumable, internally cached stream of strings.

    Pulled items are kept, so any number of consumers can examine the
    stream by position.  With ``dedupe`` set, repeated source items are
    silently dropped and positions refer to distinct emissions only.
    Exhaustion of the source is remembered: a finished stream has said
    everything it will ever say.
    """

    def __init__(self, source: Iterable[str], dedupe: bool = False, name: str = "enum"):
        self.name = name
        self._it = iter(source)
        self._dedupe = dedupe
        self._cache: list[str] = []
        self._positions: dict[str, int] = {}
        self._done = False
        self._lock = threading.RLock()

    def _pull_one(self) -> bool:
        while True:
            try:
                item = next(self._it)
            except StopIteration:
                self._done = True
                return False
            if item.strip("01") != "":
                raise ValueError(f"enumerator {self.name!r} emitted a non-binary string: {item!r}")
            if item in self._positions:
                if self._dedupe:
                    continue
                raise ValueError(
                    f"enumerator {self.name!r} repeated {to_token(item)!r}; "
                    "wrap the source with dedupe=True"
                )
            self._positions[item] = len(self._cache)
            self._cache.append(item)
            return True

    def ensure(self, count: int) -> int:
        """Cache at least ``count`` emissions if the source allows; returns cached size."""
        with self._lock:
            while not self._done and len(self._cache) < count:
                self._pull_one()
            return len(self._cache)

    def get(self, i: int) -> str | None:
        """The i-th emission (0-based), or None if the stream ends sooner."""
        with self._lock:
            self.ensure(i + 1)
            return self._cache[i] if i < len(self._cache) else None

    def position(self, x: str, limit: int) -> int | None:
        """Position of ``x`` among the first ``limit`` emissions, if visible."""
        with self._lock:
            self.ensure(limit)
            p = self._positions.get(x)
            if p is not None and p < max(limit, len(self._cache)):
                return p
            return None

    @property
    def exhausted(self) -> bool:
        return self._done

    def emitted(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(self._cache)

    def snapshot_count(self) -> int:
        return len(self._cache)


class SetSpec:
    """Abstract set presentation."""

    name = "set"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        raise NotImplementedError

    def describe(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"<SetSpec {self.describe()}>"


def member(s: SetSpec, x: str, budget: int = DEFAULT_BUDGET) -> str:
    return s.member(x, budget)


class FiniteTable(SetSpec):
    def __init__(self, members: Iterable[str]):
        self.table = frozenset(members)
        for m in self.table:
            if m.strip("01") != "":
                raise ValueError(f"not a binary string: {m!r}")
        self.name = "finite{" + ",".join(to_token(m) for m in self.sorted_members()) + "}"

    def sorted_members(self) -> list[str]:
        return sorted(self.table, key=shortlex_key)

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        return YES if x in self.table else NO


class TotalPredicate(SetSpec):
    """Membership decided by a total accept/reject function.

    The predicate accepts (halts with any output) on members and rejects on
    non-members.  Queries run it at no less than the declared budget, so a
    correctly declared presentation never answers unknown.
    """

    def __init__(self, fn: BudgetedFn, declared_budget: int = DEFAULT_BUDGET, name: str | None = None):
        self.fn = fn
        self.declared_budget = declared_budget
        self.name = name or f"pred({fn.name})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        out = self.fn.run(x, max(budget, self.declared_budget))
        if out.is_halt:
            return YES
        if out.is_reject:
            return NO
        return UNKNOWN


def predicate_set(name: str, pred: Callable[[str], bool]) -> TotalPredicate:
    fn = native(name, lambda x: "" if pred(x) else REJECT)
    return TotalPredicate(fn, declared_budget=1, name=name)


def sigma_star() -> TotalPredicate:
    return predicate_set("sigma_star", lambda _x: True)


class ReSet(SetSpec):
    """Presented by an enumerator of the set itself.

    Yes once enumerated (permanently); no only if the stream finishes
    without the string.
    """

    def __init__(self, enum: Enumerator, name: str | None = None):
        self.enum = enum
        self.name = name or f"re({enum.name})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        if self.enum.position(x, budget) is not None:
            return YES
        if self.enum.exhausted:
            return NO
        return UNKNOWN


class CoReSet(SetSpec):
    """Presented by an enumerator of the complement."""

    def __init__(self, comp_enum: Enumerator, name: str | None = None):
        self.comp_enum = comp_enum
        self.name = name or f"core({comp_enum.name})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        if self.comp_enum.position(x, budget) is not None:
            return NO
        if self.comp_enum.exhausted:
            return YES
        return UNKNOWN


class Complement(SetSpec):
    def __init__(self, inner: SetSpec):
        self.inner = inner
        self.name = f"complement({inner.describe()})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        return negate(self.inner.member(x, budget))


class JoinHat(SetSpec):
    """Marked union with the mark in the low-order bit: A0 union B1."""

    def __init__(self, a: SetSpec, b: SetSpec):
        self.a = a
        self.b = b
        self.name = f"joinhat({a.describe()},{b.describe()})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        if x == "":
            return NO
        z, mark = x[:-1], x[-1]
        return (self.a if mark == "0" else self.b).member(z, budget)


class Interleave4(SetSpec):
    """Four-phase interleaving of a set with its complement.

    Strings at universe positions 4i and 4i+2 are always in; position
    4i+1 tracks membership of the i-th string in the operand, position
    4i+3 tracks its non-membership.
    """

    def __init__(self, a: SetSpec):
        self.a = a
        self.name = f"interleave4({a.describe()})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        n = lex_rank(x)
        i, phase = divmod(n, 4)
        if phase in (0, 2):
            return YES
        inner = self.a.member(lex_unrank(i), budget)
        return inner if phase == 1 else negate(inner)


class Cylinder(SetSpec):
    """All pairs whose first coordinate lies in the operand."""

    def __init__(self, b: SetSpec):
        self.b = b
        self.name = f"cylinder({b.describe()})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        first, _second = unpair(x)
        return self.b.member(first, budget)


class KApprox(SetSpec):
    """Budgeted view of the self-acceptance set {x : machine x accepts x}.

    Yes answers are certified by an observed accepting run and are
    permanent; everything else stays unknown.
    """

    def __init__(self, declared_budget: int = DEFAULT_BUDGET):
        self.declared_budget = declared_budget
        self.name = f"K_approx({declared_budget})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        out = interpret(program_at(lex_rank(x)), x, max(budget, self.declared_budget))
        return YES if out.is_halt else UNKNOWN


class CoKCylinder(SetSpec):
    """The concrete co-acceptance cylinder over machine/self-input pairs.

    A pair decodes as (x, s).  With s empty it asserts that machine x never
    accepts x; with s nonempty it asserts that machine x accepts x after
    exactly rank(s) - 1 steps.  For every x exactly one second coordinate
    is truly in the set.
    """

    def __init__(self, declared_budget: int = DEFAULT_BUDGET):
        self.declared_budget = declared_budget
        self.name = f"coK_cyl({declared_budget})"

    def member(self, x: str, budget: int = DEFAULT_BUDGET) -> str:
        first, second = unpair(x)
        eff = max(budget, self.declared_budget)
        out = interpret(program_at(lex_rank(first)), first, eff)
        if second == "":
            if out.is_halt:
                return NO
            if out.is_reject:
                return YES
            return UNKNOWN
        required = lex_rank(second) - 1
        if required < 1:
            return NO
        if out.is_halt:
            return YES if out.steps == required else NO
        if out.is_reject:
            return NO
        # still running after eff steps: any accept time <= eff is excluded
        return NO if required <= eff else UNKNOWN


def join_hat(a: SetSpec, b: SetSpec) -> SetSpec:
    return JoinHat(a, b)


def interleave4(a: SetSpec) -> SetSpec:
    return Interleave4(a)


def cylinderize(b: SetSpec) -> SetSpec:
    return Cylinder(b)


def complement(s: SetSpec) -> SetSpec:
    return Complement(s)


def coK_cylinder_set(budget: int = DEFAULT_BUDGET) -> SetSpec:
    return CoKCylinder(budget)


def members_stream(s: SetSpec, budget: int = DEFAULT_BUDGET) -> Iterator[str]:
    """Shortlex stream of certified members; blocks forever at an unknown."""
    for x in strings():
        m = s.member(x, budget)
        if m == YES:
            yield x
        elif m == UNKNOWN:
            return


def member_enumerator(s: SetSpec, budget: int = DEFAULT_BUDGET, name: str | None = None) -> Enumerator:
    return Enumerator(members_stream(s, budget), name=name or f"members({s.describe()})")


def complement_enumerator(s: SetSpec, budget: int = DEFAULT_BUDGET, name: str | None = None) -> Enumerator:
    return Enumerator(
        members_stream(Complement(s), budget),
        name=name or f"comembers({s.describe()})",
    )
