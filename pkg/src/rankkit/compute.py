"""Step-budgeted evaluation of partial functions.

Every evaluable object in the workbench is a :class:`BudgetedFn`: a
deterministic map from (input string, step budget) to an :class:`Outcome`.
Outcomes are monotone in the budget: once an evaluation halts (accepting
with an output, or rejecting), every larger budget reproduces the same
result; a ``pending`` outcome only means the budget ran out first.

Host-level ("native") functions are admitted with a declared synthetic
step cost so that constructions compose without interpreter overhead.
Functions whose own evaluation consumes budget internally (scanning an
enumerator, racing two processes) are built with :func:`budgeted` and a
:class:`StepMeter`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Union

from .strings import lex_unrank

HALT = "halt"
REJECT_TAG = "reject"
PENDING = "pending"


class _Sentinel:
    def __init__(self, label: str):
        self._label = label

    def __repr__(self) -> str:
        return self._label


#: Returned by a native callable to signal halting in a rejecting state.
REJECT = _Sentinel("REJECT")
#: Returned by a native callable to signal that it never halts.
DIVERGE = _Sentinel("DIVERGE")

NativeResult = Union[str, _Sentinel]


@dataclass(frozen=True)
class Outcome:
    """Result of one budgeted evaluation.

    ``steps`` is the number of steps actually consumed; for pending
    outcomes it equals the budget that was granted.
    """

    tag: str
    output: str | None = None
    steps: int = 0

    @classmethod
    def halt(cls, output: str, steps: int) -> "Outcome":
        return cls(HALT, output, steps)

    @classmethod
    def reject(cls, steps: int) -> "Outcome":
        return cls(REJECT_TAG, None, steps)

    @classmethod
    def pending(cls, steps: int) -> "Outcome":
        return cls(PENDING, None, steps)

    @property
    def is_halt(self) -> bool:
        return self.tag == HALT

    @property
    def is_reject(self) -> bool:
        return self.tag == REJECT_TAG

    @property
    def is_pending(self) -> bool:
        return self.tag == PENDING

    @property
    def resolved(self) -> bool:
        return self.tag != PENDING


class BudgetedFn:
    """A deterministic, budget-monotone partial function on strings.

    ``kind`` is "native" for host closures, "machine" for interpreted
    register-machine programs, and "derived" for compositions that meter
    their own step consumption.
    """

    def __init__(self, name: str, raw: Callable[[str, int], Outcome], kind: str = "native"):
        self.name = name
        self.kind = kind
        self._raw = raw

    def run(self, x: str, budget: int) -> Outcome:
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        return self._raw(x, budget)

    def __repr__(self) -> str:
        return f"BudgetedFn({self.name!r}, kind={self.kind})"


def run(f: BudgetedFn, x: str, budget: int) -> Outcome:
    """Evaluate ``f`` on ``x`` for at most ``budget`` steps."""
    return f.run(x, budget)


def native(
    name: str,
    fn: Callable[[str], NativeResult],
    cost: int | Callable[[str], int] = 1,
) -> BudgetedFn:
    """Wrap a host function as a BudgetedFn with a synthetic step cost.

    ``fn`` returns the output string, :data:`REJECT`, or :data:`DIVERGE`.
    """

    def raw(x: str, budget: int) -> Outcome:
        c = cost(x) if callable(cost) else cost
        out = fn(x)
        if out is DIVERGE:
            return Outcome.pending(budget)
        if c > budget:
            return Outcome.pending(budget)
        if out is REJECT:
            return Outcome.reject(c)
        if not isinstance(out, str):
            raise TypeError(f"native {name!r} returned {out!r}")
        return Outcome.halt(out, c)

    return BudgetedFn(name, raw, kind="native")


def budgeted(name: str, raw: Callable[[str, int], Outcome]) -> BudgetedFn:
    """Wrap a budget-aware evaluator; the callable must be monotone itself."""
    return BudgetedFn(name, raw, kind="derived")


def identity_fn() -> BudgetedFn:
    return native("identity", lambda x: x)


def constant_fn(value: str, name: str | None = None) -> BudgetedFn:
    from .strings import to_token

    return native(name or f"constant-{to_token(value)}", lambda _x: value)


class StepMeter:
    """Tracks step consumption against a fixed budget.

    Used by derived functions and decision procedures so that nested
    evaluations and enumerator scans all draw from one allotment.
    """

    def __init__(self, budget: int):
        if budget < 0:
            raise ValueError("budget must be nonnegative")
        self.budget = budget
        self.spent = 0

    @property
    def remaining(self) -> int:
        return max(0, self.budget - self.spent)

    @property
    def exhausted(self) -> bool:
        return self.spent >= self.budget

    def charge(self, n: int = 1) -> None:
        self.spent += n

    def run(self, f: BudgetedFn, x: str) -> Outcome:
        out = f.run(x, self.remaining)
        self.spent += out.steps
        return out


def dovetail(
    inputs: Iterable[str],
    f: BudgetedFn,
    max_rounds: int | None = None,
) -> Iterator[tuple[str, Outcome]]:
    """Fair interleaved evaluation of ``f`` over a stream of inputs.

    Round r restarts ``f`` on each of the first r inputs with a budget of
    r steps; each input whose evaluation halts (or rejects) is emitted
    exactly once, in discovery order.  An input at 1-based stream position
    p whose evaluation needs t steps is therefore emitted no later than
    round max(p, t).  The generator may run forever without yielding when
    ``f`` halts nowhere; callers bound consumption (or pass max_rounds).
    """
    seen: list[str] = []
    done: set[int] = set()
    it = iter(inputs)
    stream_over = False
    r = 0
    while max_rounds is None or r < max_rounds:
        r += 1
        while not stream_over and len(seen) < r:
            try:
                seen.append(next(it))
            except StopIteration:
                stream_over = True
        if stream_over and len(done) == len(seen):
            return
        for pos in range(min(r, len(seen))):
            if pos in done:
                continue
            out = f.run(seen[pos], r)
            if out.resolved:
                done.add(pos)
                yield seen[pos], out


def shortlex_stream() -> Iterator[str]:
    """The whole universe as a dovetail input stream."""
    n = 0
    while True:
        yield lex_unrank(n)
        n += 1
