"""Polynomial expression grammar, canonical printing and report emission.

Expression grammar::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INT)?
    atom   := INT ("/" INT)? | IDENT | "(" expr ")"

``^`` binds tighter than unary minus and ``*``; there is no implicit
multiplication and ``/`` only forms rational literals.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Any, List, Sequence

from gmpy2 import mpq

from .exceptions import ParseError
from .poly import GREVLEX, Poly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


def _tokenize(text, origin):
    line0, col0 = origin
    toks = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            break
        start = m.start(m.lastindex)
        if m.group(1) is not None:
            kind, val = "int", m.group(1)
        elif m.group(2) is not None:
            kind, val = "ident", m.group(2)
        else:
            kind, val = "op", m.group(3)
            if val not in "+-*^/()":
                raise ParseError(f"unexpected character {val!r}", *_where(text, start, line0, col0))
        toks.append((kind, val, start))
        pos = m.end()
    return toks


def _where(text, offset, line0, col0):
    before = text[:offset]
    nl = before.count("\n")
    if nl:
        return line0 + nl, offset - before.rfind("\n")
    return line0, col0 + offset


class _PolyParser:
    def __init__(self, text, ring, origin):
        self.text = text
        self.ring = tuple(ring)
        self.origin = origin
        self.toks = _tokenize(text, origin)
        self.i = 0

    def error(self, msg, offset=None):
        if offset is None:
            offset = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise ParseError(msg, *_where(self.text, offset, *self.origin))

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, val=None):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        if val is not None and tok[1] != val:
            self.error(f"expected {val!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def parse(self):
        if not self.toks:
            self.error("empty expression")
        p = self.expr()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() is not None and self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() is not None and self.peek()[1] == "*":
            self.take()
            p = p * self.unary()
        return p

    def unary(self):
        tok = self.peek()
        if tok is not None and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return -p if tok[1] == "-" else p
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok is not None and tok[1] == "^":
            self.take()
            e = self.peek()
            if e is None or e[0] != "int":
                self.error("exponent must be a non-negative integer literal")
            self.take()
            return base ** int(e[1])
        return base

    def atom(self):
        tok = self.peek()
        if tok is None:
            self.error("unexpected end of expression")
        kind, val, off = tok
        if kind == "int":
            self.take()
            nxt = self.peek()
            if nxt is not None and nxt[1] == "/":
                self.take()
                d = self.peek()
                if d is None or d[0] != "int":
                    self.error("'/' is only allowed inside a rational literal a/b")
                self.take()
                if int(d[1]) == 0:
                    self.error("zero denominator", d[2])
                return Poly.const(self.ring, mpq(int(val), int(d[1])))
            return Poly.const(self.ring, int(val))
        if kind == "ident":
            self.take()
            if val not in self.ring:
                self.error(f"unknown variable {val!r}", off)
            return Poly.var(self.ring, val)
        if val == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        if val == "/":
            self.error("'/' is only allowed inside a rational literal a/b")
        self.error(f"unexpected {val!r}")


def parse_poly(text: str, ring: Sequence[str], origin=(1, 1)) -> Poly:
    """Parse ``text`` over the variable list ``ring``."""
    return _PolyParser(text, ring, origin).parse()


def _format_rational(c) -> str:
    c = mpq(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(ring, e):
    parts = []
    for name, x in zip(ring, e):
        if x == 1:
            parts.append(name)
        elif x:
            parts.append(f"{name}^{x}")
    return "*".join(parts)


def print_canonical(p: Poly) -> str:
    """Deterministic text: graded-reverse-lex descending, exact rational coefficients."""
    if p.is_zero():
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms(GREVLEX)):
        neg = c < 0
        a = -c if neg else c
        mono = _format_monomial(p.ring, e)
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def rational_json(c) -> str:
    return _format_rational(c)


# ---------------------------------------------------------------- reports

STATUSES = ("ok", "fail", "limit", "error", "numeric")


@dataclass
class Report:
    task_id: str
    kind: str
    status: str
    payload: dict = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)

    def to_dict(self):
        return {
            "task": self.task_id,
            "kind": self.kind,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": list(self.diagnostics),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["task"], d["kind"], d["status"], d.get("payload", {}), list(d.get("diagnostics", [])))

    @property
    def ok(self):
        return self.status == "ok"


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".eEn"):
        s += ".0"
    return s


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats fixed at 17 significant digits, keys in insertion order."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, Poly):
        return json.dumps(print_canonical(obj), ensure_ascii=False)
    if type(obj).__name__ in ("mpq", "mpz") or hasattr(obj, "denominator"):
        return json.dumps(_format_rational(obj))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def emit_report(reports, mode: str = "text") -> str:
    """Render one report or a list of them; json mode is a top-level array."""
    if isinstance(reports, Report):
        reports = [reports]
    if mode == "json":
        return dumps([r.to_dict() for r in reports]) + "\n"
    if mode != "text":
        raise ValueError(f"unknown output mode {mode!r}")
    lines = []
    for r in reports:
        lines.append(f"[{r.status.upper():>5}] {r.task_id} ({r.kind})")
        for key, value in r.payload.items():
            lines.extend(_text_lines(key, value, "    "))
        for d in r.diagnostics:
            lines.append(f"    ! {d}")
    return "\n".join(lines) + "\n"


def _text_lines(key, value, pad):
    if isinstance(value, dict):
        out = [f"{pad}{key}:"]
        for k, v in value.items():
            out.extend(_text_lines(k, v, pad + "  "))
        return out
    if isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return [f"{pad}{key}: [" + ", ".join(_scalar_text(v) for v in value) + "]"]
        out = [f"{pad}{key}:"]
        for i, v in enumerate(value):
            out.extend(_text_lines(f"[{i}]", v, pad + "  "))
        return out
    return [f"{pad}{key}: {_scalar_text(value)}"]


def _scalar_text(v):
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, Poly):
        return print_canonical(v)
    if v is None:
        return "-"
    return str(v)
