"""Command implementations shared by the HTTP service and the CLI.

Every command returns ``(status, report)`` where status follows the
process exit convention: 0 pass/accept, 1 refuted/reject, 2 inconclusive,
3 usage or premise error.  Reports are plain JSON-ready dicts, and a given
command invocation is fully deterministic.
"""

from __future__ import annotations

import os
from pathlib import Path

from .checkers import (
    INCONCLUSIVE,
    OneTTReduction,
    PASS,
    REFUTED,
    TT_NEGATION,
    VerifyReport,
    check_1tt,
    check_compression,
    check_ranking,
    oracle_ranker,
)
from .compute import BudgetedFn, constant_fn, identity_fn, native
from .constructions import (
    bundle_thm103,
    bundle_thm123,
    inseparable_separator,
    join_hat_ranker,
    interleave4_compressor,
    lA_construction,
    myhill_isomorphism,
    re_compressor,
    retrace_to_rank,
    thm123_backward_reduction,
    thm123_forward_reduction,
)
from .errors import InjectivityError, RankkitError
from .machines import machine_at, machine_fn, parse_program
from .procedures import (
    decide_core_with_subset,
    decide_re_with_ranker,
    diagonalize,
    audit_diagonal,
    totalize_ranker,
    variant_a_decider,
)
from .sets import (
    Complement,
    CoReSet,
    Enumerator,
    FiniteTable,
    NO,
    SetSpec,
    UNKNOWN,
    YES,
    complement_enumerator,
    member_enumerator,
)
from .setlang import parse_set
from .strings import from_token, lex_rank, pair, shortlex_key, strings, to_token
from .machines import enumerate_machines

BUDGET_ENV = "RANKKIT_BUDGET"
FALLBACK_BUDGET = 100_000

STATUS_PASS = 0
STATUS_REFUTED = 1
STATUS_INCONCLUSIVE = 2
STATUS_ERROR = 3

_VERDICT_STATUS = {PASS: STATUS_PASS, REFUTED: STATUS_REFUTED, INCONCLUSIVE: STATUS_INCONCLUSIVE}
_ANSWER_STATUS = {"accept": STATUS_PASS, "reject": STATUS_REFUTED, "inconclusive": STATUS_INCONCLUSIVE}


def default_budget() -> int:
    raw = os.environ.get(BUDGET_ENV, "")
    return int(raw) if raw.isdigit() else FALLBACK_BUDGET


def resolve_budget(budget: int | None) -> int:
    if budget is None:
        return default_budget()
    if budget <= 0:
        raise ValueError("budget must be positive")
    return budget


def _error_report(exc: Exception) -> dict:
    info: dict = {"kind": type(exc).__name__, "message": str(exc)}
    token = getattr(exc, "token", None)
    if token:
        info["token"] = token
    witness = getattr(exc, "witness", None)
    if witness:
        info["witness"] = witness
    return {"error": info}


def build_fn(tag: str, s: SetSpec | None, budget: int) -> BudgetedFn:
    """Resolve a function reference: builtin tag, machine index, or program file."""
    if tag == "identity":
        return identity_fn()
    if tag == "constant-eps":
        return constant_fn("")
    if tag == "thm103":
        return join_hat_ranker()
    if tag == "thm123":
        return interleave4_compressor()
    if tag.startswith("machine:"):
        return machine_at(int(tag.split(":", 1)[1]))
    if tag.startswith("@"):
        text = Path(tag[1:]).read_text()
        return machine_fn(parse_program(text), name=tag)
    if tag in ("oracle", "oracle-reject", "oracle-diverge"):
        if s is None:
            raise ValueError(f"function tag {tag!r} needs a set")
        mode = {"oracle": "count", "oracle-reject": "reject", "oracle-diverge": "diverge"}[tag]
        return oracle_ranker(s, budget, nonmember=mode)
    if tag == "prop106":
        if s is None:
            raise ValueError("prop106 needs a set")
        return re_compressor(member_enumerator(s, budget))
    if tag == "retrace":
        if s is None:
            raise ValueError("retrace needs a set")
        return _oracle_retrace_rank(s, budget)
    raise ValueError(f"unknown function tag {tag!r}")


def _oracle_retrace_rank(s: SetSpec, budget: int) -> BudgetedFn:
    """Chain-counting ranker for a decidable set, via an oracle retracer."""
    def previous_member(x: str):
        if s.member(x, budget) != YES:
            return x  # total-mode abort: a non-member fails to move down
        r = lex_rank(x)
        from .strings import lex_unrank

        for i in range(r - 1, -1, -1):
            y = lex_unrank(i)
            if s.member(y, budget) == YES:
                return y
        return x  # least member retraces to itself

    retracer = native(f"retracer({s.describe()})", previous_member)
    a0 = _least_member(s, budget)
    return retrace_to_rank(retracer, a0, total_mode=True)


def _least_member(s: SetSpec, budget: int) -> str:
    for x in strings():
        m = s.member(x, budget)
        if m == YES:
            return x
        if m == UNKNOWN:
            raise ValueError(f"could not resolve a least member of {s.describe()}")
    raise ValueError("empty set has no least member")


def build_reduction(tag: str) -> OneTTReduction:
    if tag == "identity":
        return OneTTReduction(identity_fn(), name="identity")
    if tag == "thm123-fwd":
        return thm123_forward_reduction()
    if tag == "thm123-back":
        return thm123_backward_reduction()
    if tag == "thm123-fwd-negated":
        r = thm123_forward_reduction()
        return OneTTReduction(r.query, TT_NEGATION, name="into-interleaving-negated")
    raise ValueError(f"unknown reduction tag {tag!r}")


def _as_cofinite_core(s: SetSpec, budget: int) -> CoReSet:
    """Present a co-finite set by an exhausting complement enumerator."""
    if isinstance(s, CoReSet):
        return s
    if isinstance(s, Complement) and isinstance(s.inner, FiniteTable):
        comp = sorted(s.inner.table, key=shortlex_key)
        return CoReSet(Enumerator(iter(comp), name=f"listed({len(comp)})"))
    raise ValueError("this construction needs a co-finite set, e.g. complement(finite{...})")


def _report_with_status(rep: VerifyReport, recheck: dict | None = None) -> tuple[int, dict]:
    d = rep.to_json_dict()
    if recheck is not None:
        d["recheck"] = recheck
    return _VERDICT_STATUS[rep.verdict], d


def _recheck_verify(rep: VerifyReport, fn: BudgetedFn, budget: int) -> dict:
    """Independently re-run the evaluations cited by a refutation witness."""
    if rep.verdict != REFUTED or not rep.witness:
        return {"verdict": "not-applicable"}
    w = rep.witness
    clause = w.get("clause")
    if clause in ("rank-mismatch", "domain"):
        out = fn.run(from_token(w["string"]), budget)
        if clause == "domain":
            ok = not out.is_halt
        else:
            ok = out.is_halt and to_token(out.output or "") == w["got"]
        return {"verdict": "confirmed" if ok else "diverged"}
    if clause == "collision":
        o1 = fn.run(from_token(w["first"]), budget)
        o2 = fn.run(from_token(w["second"]), budget)
        ok = o1.is_halt and o2.is_halt and o1.output == o2.output
        return {"verdict": "confirmed" if ok else "diverged"}
    return {"verdict": "unsupported-clause"}


def cmd_verify_rank(
    fn: str,
    set_expr: str,
    max_len: int = 10,
    budget: int | None = None,
    recheck: bool = False,
) -> tuple[int, dict]:
    try:
        b = resolve_budget(budget)
        s = parse_set(set_expr)
        f = build_fn(fn, s, b)
        rep = check_ranking(f, s, max_len, b)
        extra = _recheck_verify(rep, f, b) if recheck else None
        return _report_with_status(rep, extra)
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except (ValueError, OSError) as exc:
        return STATUS_ERROR, _error_report(exc)


def cmd_verify_compress(
    fn: str,
    set_expr: str,
    max_len: int = 10,
    cover_count: int = 0,
    budget: int | None = None,
    recheck: bool = False,
) -> tuple[int, dict]:
    try:
        b = resolve_budget(budget)
        s = parse_set(set_expr)
        f = build_fn(fn, s, b)
        rep = check_compression(f, s, max_len, cover_count, b)
        extra = _recheck_verify(rep, f, b) if recheck else None
        return _report_with_status(rep, extra)
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except (ValueError, OSError) as exc:
        return STATUS_ERROR, _error_report(exc)


def cmd_verify_1tt(
    reduction: str,
    set_expr: str,
    set2_expr: str,
    max_len: int = 8,
    budget: int | None = None,
) -> tuple[int, dict]:
    try:
        b = resolve_budget(budget)
        a = parse_set(set_expr)
        bb = parse_set(set2_expr)
        r = build_reduction(reduction)
        rep = check_1tt(r, a, bb, max_len, b)
        return _report_with_status(rep)
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except ValueError as exc:
        return STATUS_ERROR, _error_report(exc)


def _aggregate(checks: list[tuple[str, VerifyReport]]) -> tuple[int, list[dict]]:
    status = STATUS_PASS
    rows = []
    for label, rep in checks:
        rows.append({"label": label, "report": rep.to_json_dict()})
        status = max(status, _VERDICT_STATUS[rep.verdict])
    return status, rows


def cmd_construct(
    tag: str,
    set_expr: str | None = None,
    max_len: int = 8,
    budget: int | None = None,
) -> tuple[int, dict]:
    try:
        b = resolve_budget(budget)
        s = parse_set(set_expr) if set_expr else None
        if tag == "thm103":
            if s is None:
                raise ValueError("thm103 needs a set")
            bundle = bundle_thm103(s, max_len=max_len, budget=b)
        elif tag == "thm123":
            if s is None:
                raise ValueError("thm123 needs a set")
            bundle = bundle_thm123(s, max_len=max_len, budget=b)
        elif tag == "prop106":
            if s is None:
                raise ValueError("prop106 needs a set")
            from .constructions import ConstructionBundle

            enum = member_enumerator(s, b)
            bundle = ConstructionBundle(
                tag="prop106",
                set=s,
                fn=re_compressor(enum),
                checks=[{"check": "compression", "max_len": max_len, "budget": b}],
            )
        elif tag == "beta1":
            if s is None:
                raise ValueError("beta1 needs a set")
            core = _as_cofinite_core(s, b)
            x0 = _least_member(core, b)
            comp0 = core.comp_enum.get(0)
            if comp0 is None:
                raise ValueError("beta1 needs a nonempty complement")
            bundle = lA_construction(core, x0, comp0, budget=b)
        elif tag == "thm169":
            if s is None:
                raise ValueError("thm169 needs a set")
            core = _as_cofinite_core(s, b)
            partial = oracle_ranker(core, b, nonmember="diverge")
            core.comp_enum.ensure(b)
            comp = list(core.comp_enum.emitted())
            total = totalize_ranker(partial, Enumerator(iter(comp), name="comp-copy"))
            rep = check_ranking(total, core, max_len, b)
            return _report_with_status(rep)
        elif tag == "retrace":
            if s is None:
                raise ValueError("retrace needs a set")
            rep = check_ranking(_oracle_retrace_rank(s, b), s, max_len, b)
            return _report_with_status(rep)
        elif tag == "separator":
            return _construct_separator(b)
        else:
            raise ValueError(f"unknown construction tag {tag!r}")
        status, rows = _aggregate(bundle.run_checks(b))
        return status, {"tag": bundle.tag, "checks": rows}
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except ValueError as exc:
        return STATUS_ERROR, _error_report(exc)


def _separator_toy() -> tuple[OneTTReduction, list[str], list[str], frozenset, frozenset]:
    """A fixed disjoint pair with a one-query reduction whose finite side
    sets separate it: identity-table queries from the first side land in
    l_a, negation-table queries from the second land in l_b, and neither
    side's remaining queries touch the other's table."""
    side_a = ["0", "00", "000"]
    side_b = ["1", "01", "0000"]
    query_map = {
        "0": "11", "00": "100", "000": "0001",
        "1": "0010", "01": "110", "0000": "111",
    }
    tag_map = {"0": "identity", "00": "identity", "000": "negation",
               "1": "identity", "01": "negation", "0000": "negation"}
    query = native("toy-query", lambda x: query_map.get(x, x))
    table = OneTTReduction(query, lambda x: tag_map.get(x, "identity"), name="toy-1tt")
    l_a = frozenset(query_map[x] for x in side_a if tag_map[x] == "identity")
    l_b = frozenset(query_map[x] for x in side_b if tag_map[x] == "negation")
    return table, side_a, side_b, l_a, l_b


def _construct_separator(budget: int) -> tuple[int, dict]:
    r, side_a, side_b, l_a, l_b = _separator_toy()
    g = inseparable_separator(r, l_a, l_b)
    examined = 0
    steps = 0
    for x, want in [(x, "1") for x in side_a] + [(x, "0") for x in side_b]:
        examined += 1
        out = g.run(x, budget)
        steps += out.steps
        if not (out.is_halt and out.output == want):
            rep = VerifyReport(
                REFUTED,
                {"clause": "separator-output", "string": to_token(x), "want": want},
                examined,
                steps,
            )
            return _report_with_status(rep)
    return _report_with_status(VerifyReport(PASS, None, examined, steps))


def cmd_decide(
    proc: str,
    set_expr: str,
    x: str,
    budget: int | None = None,
) -> tuple[int, dict]:
    try:
        b = resolve_budget(budget)
        s = parse_set(set_expr)
        query = from_token(x)
        if proc == "thm25":
            rec = decide_re_with_ranker(member_enumerator(s, b), oracle_ranker(s, b), query, b)
        elif proc == "thm167":
            rec = decide_core_with_subset(
                complement_enumerator(s, b),
                member_enumerator(s, b),
                oracle_ranker(s, b),
                query,
                b,
            )
        elif proc == "appendix-a":
            rec = variant_a_decider(oracle_ranker(s, b, nonmember="reject"), query, b)
        else:
            raise ValueError(f"unknown decision procedure {proc!r}")
        return _ANSWER_STATUS[rec.answer], rec.to_json_dict()
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except ValueError as exc:
        return STATUS_ERROR, _error_report(exc)


def cmd_diagonalize(
    count: int = 20,
    stage_budget: int = 10_000,
    horizon: int = 1_000,
    audit: bool = True,
    budget: int | None = None,
) -> tuple[int, dict]:
    try:
        if count <= 0 or stage_budget <= 0 or horizon <= 0:
            raise ValueError("count, stage budget, and horizon must be positive")
        machines = enumerate_machines(count)
        state = diagonalize(machines, stage_budget, horizon)
        report = state.to_json_dict()
        status = STATUS_PASS
        if audit:
            rep = audit_diagonal(state, machines, resolve_budget(budget))
            report["audit"] = rep.to_json_dict()
            status = _VERDICT_STATUS[rep.verdict]
        return status, report
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except ValueError as exc:
        return STATUS_ERROR, _error_report(exc)


_MAPS = {
    "identity": lambda: identity_fn(),
    "swap01": lambda: native("swap01", lambda x: {"0": "1", "1": "0"}.get(x, x)),
    "pad-eps": lambda: native("pad-eps", lambda x: pair(x, "")),
}


def cmd_isomorphism(
    f: str,
    g: str,
    set_expr: str,
    set2_expr: str,
    n: int = 64,
    budget: int | None = None,
) -> tuple[int, dict]:
    try:
        b = resolve_budget(budget)
        a = parse_set(set_expr)
        bset = parse_set(set2_expr)
        if f not in _MAPS or g not in _MAPS:
            raise ValueError(f"unknown map tag; choose from {sorted(_MAPS)}")
        try:
            table = myhill_isomorphism(_MAPS[f](), _MAPS[g](), n, b)
        except InjectivityError as exc:
            return STATUS_REFUTED, {"error": _error_report(exc)["error"]}
        violations = []
        unresolved = 0
        for u, v in sorted(table.items(), key=lambda kv: lex_rank(kv[0])):
            mu = a.member(u, b)
            mv = bset.member(v, b)
            if UNKNOWN in (mu, mv):
                unresolved += 1
            elif mu != mv:
                violations.append({"left": to_token(u), "right": to_token(v)})
        report = {
            "pairs": len(table),
            "unresolved": unresolved,
            "violations": violations,
            "table": {to_token(u): to_token(v) for u, v in sorted(table.items(), key=lambda kv: lex_rank(kv[0]))[:32]},
        }
        return (STATUS_PASS if not violations else STATUS_REFUTED), report
    except RankkitError as exc:
        return STATUS_ERROR, _error_report(exc)
    except ValueError as exc:
        return STATUS_ERROR, _error_report(exc)
