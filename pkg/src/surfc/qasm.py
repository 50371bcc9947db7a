"""Minimal OpenQASM 2 reader that keeps only CNOT structure.

Supported subset: one ``qreg``, optional ``creg``/``barrier``/``measure``/
``reset`` (dropped), single-qubit gate applications (dropped), ``cx``
statements, and ``gate`` definitions whose bodies are inlined when applied so
that nested ``cx`` gates are recovered.  ``include`` lines are tolerated and
skipped; included files are never read.  Anything else is a parse error with
a line number.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .circuits import CnotGate, LogicalCircuit
from .errors import CircuitError, QasmError

_STATEMENT_RE = re.compile(r"[^;{}]*[;{}]")
_ID = r"[A-Za-z_][A-Za-z0-9_]*"
_QREG_RE = re.compile(rf"^qreg\s+({_ID})\s*\[\s*(\d+)\s*\]$")
_CREG_RE = re.compile(rf"^creg\s+({_ID})\s*\[\s*(\d+)\s*\]$")
_OPERAND_RE = re.compile(rf"^({_ID})(?:\s*\[\s*(\d+)\s*\])?$")
_APPLY_RE = re.compile(rf"^({_ID})\s*(\([^)]*\))?\s*(.*)$", re.S)
_GATE_DECL_RE = re.compile(rf"^gate\s+({_ID})\s*(\([^)]*\))?\s*([^{{]*)$")

_DROPPED_KEYWORDS = ("barrier", "measure", "reset")


@dataclass
class _GateDef:
    params: list[str]
    args: list[str]
    body: list[tuple[int, str]]  # (line, statement text)


def _strip_comments(text: str) -> str:
    out_lines = []
    for line in text.splitlines():
        idx = line.find("//")
        out_lines.append(line if idx < 0 else line[:idx])
    return "\n".join(out_lines)


def _statements(text: str):
    """Yield (line_number, statement, terminator) honoring ; { } terminators."""
    pos = 0
    line = 1
    n = len(text)
    while pos < n:
        m = _STATEMENT_RE.match(text, pos)
        if m is None:
            rest = text[pos:].strip()
            if rest:
                raise QasmError(f"unterminated statement: {rest[:40]!r}", line)
            return
        chunk = m.group(0)
        stmt, term = chunk[:-1].strip(), chunk[-1]
        stmt_line = line + text.count("\n", pos, pos + len(chunk) - len(chunk.lstrip()))
        line += chunk.count("\n")
        pos = m.end()
        if stmt or term in "{}":
            yield stmt_line, stmt, term


class _Parser:
    def __init__(self):
        self.reg: str | None = None
        self.n = 0
        self.defs: dict[str, _GateDef] = {}
        self.pairs: list[tuple[int, int]] = []

    def parse(self, text: str) -> LogicalCircuit:
        stream = _statements(_strip_comments(text))
        for line, stmt, term in stream:
            if term == "{":
                self._parse_gate_def(line, stmt, stream)
                continue
            if term == "}":
                raise QasmError("unmatched '}'", line)
            self._top_statement(line, stmt)
        if self.reg is None:
            raise QasmError("no qreg declared")
        gates = tuple(CnotGate(i, c, t) for i, (c, t) in enumerate(self.pairs))
        return LogicalCircuit(self.n, gates)

    def _parse_gate_def(self, line: int, header: str, stream) -> None:
        m = _GATE_DECL_RE.match(header)
        if not m:
            raise QasmError(f"malformed block header: {header!r}", line)
        name, params, args = m.group(1), m.group(2), m.group(3)
        body: list[tuple[int, str]] = []
        for bline, stmt, term in stream:
            if term == "}":
                if stmt:
                    body.append((bline, stmt))
                break
            if term == "{":
                raise QasmError("nested blocks are not supported", bline)
            body.append((bline, stmt))
        else:
            raise QasmError(f"gate {name} body never closed", line)
        plist = [p.strip() for p in params[1:-1].split(",")] if params else []
        alist = [a.strip() for a in args.split(",") if a.strip()]
        self.defs[name] = _GateDef([p for p in plist if p], alist, body)

    def _top_statement(self, line: int, stmt: str) -> None:
        if stmt.startswith("OPENQASM") or stmt.startswith("include"):
            return
        m = _QREG_RE.match(stmt)
        if m:
            if self.reg is not None:
                raise QasmError("multiple qreg declarations are not supported", line)
            self.reg = m.group(1)
            self.n = int(m.group(2))
            return
        if _CREG_RE.match(stmt):
            return
        first = stmt.split(None, 1)[0] if stmt else ""
        if first in _DROPPED_KEYWORDS:
            return
        self._apply(line, stmt, {})

    def _apply(self, line: int, stmt: str, binding: dict[str, int]) -> None:
        m = _APPLY_RE.match(stmt)
        if not m:
            raise QasmError(f"malformed statement: {stmt!r}", line)
        name, _params, operand_text = m.group(1), m.group(2), m.group(3)
        operands = [o.strip() for o in operand_text.split(",") if o.strip()]
        if name in ("cx", "CX"):
            if len(operands) != 2:
                raise QasmError(f"cx expects 2 operands, got {len(operands)}", line)
            c = self._resolve(line, operands[0], binding)
            t = self._resolve(line, operands[1], binding)
            if c == t:
                raise CircuitError(f"line {line}: cx with equal operands q[{c}]")
            self.pairs.append((c, t))
            return
        if name in self.defs:
            gdef = self.defs[name]
            if len(operands) != len(gdef.args):
                raise QasmError(
                    f"gate {name} expects {len(gdef.args)} operands, got {len(operands)}", line
                )
            inner = {
                formal: self._resolve(line, actual, binding)
                for formal, actual in zip(gdef.args, operands)
            }
            for bline, bstmt in gdef.body:
                self._apply(bline, bstmt, inner)
            return
        if len(operands) == 1:
            return  # single-qubit gate: executed in software / locally, not modeled
        raise QasmError(f"unsupported multi-qubit gate {name!r}", line)

    def _resolve(self, line: int, operand: str, binding: dict[str, int]) -> int:
        m = _OPERAND_RE.match(operand)
        if not m:
            raise QasmError(f"malformed operand {operand!r}", line)
        name, idx = m.group(1), m.group(2)
        if idx is None:
            if name in binding:
                return binding[name]
            raise QasmError(f"whole-register operand {name!r} not supported here", line)
        if name != self.reg:
            raise QasmError(f"unknown register {name!r}", line)
        q = int(idx)
        if not 0 <= q < self.n:
            raise CircuitError(f"line {line}: qubit index {q} out of range [0, {self.n})")
        return q


def parse_qasm(text: str) -> LogicalCircuit:
    """Parse an OpenQASM-2 program, retaining only its cx gates in program order."""
    return _Parser().parse(text)
