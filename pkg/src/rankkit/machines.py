"""A minimal register machine and its self-enumeration.

Programs operate on sparse registers holding naturals (string ranks).
Register 0 starts as the shortlex rank of the input string.  Instructions,
each costing one step:

    out r      halt accepting; output is the string of rank R[r]
    rej        halt rejecting
    inc r      R[r] += 1
    dec r j    if R[r] == 0 jump to j, else R[r] -= 1 and fall through
    cpy a b    R[b] = R[a]

Falling off the end of the program rejects.  A machine "accepts" an input
when it halts via ``out``; the same run also defines the value of the
partial function the machine computes, so one enumeration serves both the
language-acceptor and the function-computer readings.

The index-to-program map is a bijection between the naturals and all
programs (Cantor coding of the instruction list), so every program occurs
at exactly one index and decoding is total.  ``encode_program`` is the
exact inverse, which lets tests and demos construct indices with known
behaviour.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .compute import BudgetedFn, Outcome
from .errors import MachineDecodeError
from .strings import cantor_pair, cantor_unpair, lex_rank, lex_unrank

OPS = ("out", "rej", "inc", "dec", "cpy")
_ARITY = {"out": 1, "rej": 0, "inc": 1, "dec": 2, "cpy": 2}


@dataclass(frozen=True)
class Instr:
    op: str
    a: int = 0
    b: int = 0

    def text(self) -> str:
        arity = _ARITY[self.op]
        if arity == 0:
            return self.op
        if arity == 1:
            return f"{self.op} {self.a}"
        return f"{self.op} {self.a} {self.b}"


Program = tuple[Instr, ...]


def instr_decode(code: int) -> Instr:
    if code == 0:
        return Instr("rej")
    q, r = divmod(code - 1, 4)
    if r == 0:
        return Instr("out", q)
    if r == 1:
        return Instr("inc", q)
    a, b = cantor_unpair(q)
    if r == 2:
        return Instr("dec", a, b)
    return Instr("cpy", a, b)


def instr_encode(ins: Instr) -> int:
    if ins.op == "rej":
        return 0
    if ins.op == "out":
        return 1 + 4 * ins.a
    if ins.op == "inc":
        return 2 + 4 * ins.a
    q = cantor_pair(ins.a, ins.b)
    if ins.op == "dec":
        return 3 + 4 * q
    if ins.op == "cpy":
        return 4 + 4 * q
    raise ValueError(f"unknown op {ins.op!r}")


@lru_cache(maxsize=65536)
def program_at(index: int) -> Program:
    """Total decoding of a natural into a (nonempty) program."""
    if index < 0:
        raise ValueError("machine index must be nonnegative")
    k, m = cantor_unpair(index)
    codes = []
    for _ in range(k):
        c, m = cantor_unpair(m)
        codes.append(c)
    codes.append(m)
    return tuple(instr_decode(c) for c in codes)


def encode_program(program: Program) -> int:
    """Inverse of program_at."""
    if not program:
        raise ValueError("programs are nonempty")
    codes = [instr_encode(i) for i in program]
    m = codes[-1]
    for c in reversed(codes[:-1]):
        m = cantor_pair(c, m)
    return cantor_pair(len(codes) - 1, m)


def interpret(program: Program, x: str, budget: int) -> Outcome:
    """Run a program for at most ``budget`` steps (each observation costs one)."""
    regs = {0: lex_rank(x)}
    pc = 0
    steps = 0
    n = len(program)
    get = regs.get
    while True:
        if steps >= budget:
            return Outcome.pending(budget)
        steps += 1
        if pc >= n:
            return Outcome.reject(steps)
        ins = program[pc]
        op = ins.op
        if op == "out":
            return Outcome.halt(lex_unrank(get(ins.a, 0)), steps)
        if op == "rej":
            return Outcome.reject(steps)
        if op == "inc":
            regs[ins.a] = get(ins.a, 0) + 1
            pc += 1
        elif op == "dec":
            v = get(ins.a, 0)
            if v == 0:
                pc = ins.b
            else:
                regs[ins.a] = v - 1
                pc += 1
        else:  # cpy
            regs[ins.b] = get(ins.a, 0)
            pc += 1


def machine_fn(program: Program, name: str | None = None) -> BudgetedFn:
    fn = BudgetedFn(
        name or f"machine<{format_program(program)!r}>",
        lambda x, budget: interpret(program, x, budget),
        kind="machine",
    )
    fn.program = program  # type: ignore[attr-defined]
    return fn


def machine_at(index: int) -> BudgetedFn:
    return machine_fn(program_at(index), name=f"machine[{index}]")


def enumerate_machines(count: int) -> list[BudgetedFn]:
    """The first ``count`` machines of the fixed enumeration."""
    if count < 0:
        raise ValueError("count must be nonnegative")
    return [machine_at(i) for i in range(count)]


def halting_probe(x: str, budget: int) -> bool:
    """True iff the machine indexed by ``x`` accepts ``x`` within ``budget``.

    A True answer is permanent under budget increase; False only means
    "not yet observed".
    """
    return interpret(program_at(lex_rank(x)), x, budget).is_halt


def accept_time(index: int, x: str, budget: int) -> int | None:
    """Exact number of steps after which machine ``index`` accepts ``x``.

    None when the machine does not accept within ``budget`` (it may reject,
    or still be running).
    """
    out = interpret(program_at(index), x, budget)
    return out.steps if out.is_halt else None


def format_program(program: Program) -> str:
    return "\n".join(ins.text() for ins in program) + "\n"


def parse_program(text: str) -> Program:
    """Parse line-based assembly; raises MachineDecodeError on any defect."""
    instrs = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        op = parts[0]
        if op not in _ARITY:
            raise MachineDecodeError(f"line {lineno}: unknown opcode {op!r}")
        if len(parts) - 1 != _ARITY[op]:
            raise MachineDecodeError(
                f"line {lineno}: {op!r} takes {_ARITY[op]} operand(s), got {len(parts) - 1}"
            )
        args = []
        for tok in parts[1:]:
            if not tok.isdigit():
                raise MachineDecodeError(f"line {lineno}: bad operand {tok!r}")
            args.append(int(tok))
        instrs.append(Instr(op, *args))
    if not instrs:
        raise MachineDecodeError("empty program")
    return tuple(instrs)
