"""Textual set descriptions for the CLI and service.

Grammar:

    expr  := 'finite' '{' items? '}'
           | 'empty'
           | 'sigma_star'
           | 'K_approx' '(' nat ')'
           | 'coK_cyl' '(' nat ')'
           | 'joinhat' '(' expr ',' expr ')'
           | 'interleave4' '(' expr ')'
           | 'complement' '(' expr ')'
           | 'cylinder' '(' expr ')'
    items := item (',' item)*
    item  := binary string | 'eps'

Example: joinhat(finite{0,10}, complement(finite{0,10}))
"""

from __future__ import annotations

import re

from .errors import SetExprError
from .sets import (
    CoKCylinder,
    Complement,
    Cylinder,
    FiniteTable,
    Interleave4,
    JoinHat,
    KApprox,
    SetSpec,
    sigma_star,
)
from .strings import from_token

_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9]*|[0-9]+|[(){},])")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            raise SetExprError(f"unexpected character at {rest[:8]!r}", token=rest[:1], position=pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self) -> str:
        if self.i >= len(self.tokens):
            raise SetExprError("unexpected end of set expression", token="", position=len(self.text))
        tok, pos = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, want: str) -> None:
        got = self.peek()
        if got != want:
            raise SetExprError(
                f"expected {want!r}, found {got!r}",
                token=got or "",
                position=self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text),
            )
        self.i += 1

    def nat(self) -> int:
        tok = self.take()
        if not tok.isdigit():
            raise SetExprError(f"expected a number, found {tok!r}", token=tok)
        return int(tok)

    def item(self) -> str:
        tok = self.take()
        if tok == "eps":
            return ""
        if tok.strip("01") == "" and tok != "":
            return tok
        raise SetExprError(f"expected a binary string or 'eps', found {tok!r}", token=tok)

    def expr(self) -> SetSpec:
        tok = self.take()
        if tok == "finite":
            self.expect("{")
            items: list[str] = []
            if self.peek() != "}":
                items.append(self.item())
                while self.peek() == ",":
                    self.take()
                    items.append(self.item())
            self.expect("}")
            return FiniteTable(items)
        if tok == "empty":
            return FiniteTable([])
        if tok == "sigma_star":
            return sigma_star()
        if tok == "K_approx":
            self.expect("(")
            n = self.nat()
            self.expect(")")
            return KApprox(n)
        if tok == "coK_cyl":
            self.expect("(")
            n = self.nat()
            self.expect(")")
            return CoKCylinder(n)
        if tok == "joinhat":
            self.expect("(")
            a = self.expr()
            self.expect(",")
            b = self.expr()
            self.expect(")")
            return JoinHat(a, b)
        if tok in ("interleave4", "complement", "cylinder"):
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            cls = {"interleave4": Interleave4, "complement": Complement, "cylinder": Cylinder}[tok]
            return cls(inner)
        raise SetExprError(f"unknown set constructor {tok!r}", token=tok)


def parse_set(text: str) -> SetSpec:
    p = _Parser(text)
    result = p.expr()
    if p.peek() is not None:
        raise SetExprError(f"trailing input {p.peek()!r}", token=p.peek() or "")
    return result
