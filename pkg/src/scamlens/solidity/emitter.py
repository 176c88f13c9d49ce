"""Canonical source emission for parsed units.

Emitted text re-parses to a structurally equal SourceUnit. Opaque nodes
are spliced back byte-for-byte; everything else is printed in one fixed
style (4-space indent, one statement per line, minimal parentheses).
"""

from __future__ import annotations

from .nodes import (
    AddressLit, AssignStmt, Binary, BlockStmt, BoolLit, Call, ContractDef,
    Expr, ExprStmt, ForStmt, FunctionDef, Ident, IfStmt, ImportDirective,
    Index, Member, NumberLit, OpaqueItem, OpaqueMember, OpaqueStmt,
    ReturnStmt, SourceUnit, StateVar, Stmt, StringLit, This, Unary,
    VarDeclStmt,
)

_INDENT = "    "

# precedence must mirror the parser's _BINARY_LEVELS
_PRECEDENCE = {
    "||": 1, "&&": 2, "==": 3, "!=": 3, "<": 4, ">": 4, "<=": 4, ">=": 4,
    "|": 5, "^": 6, "&": 7, "<<": 8, ">>": 8, "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10, "**": 11,
}
_UNARY_PREC = 12


def emit_source(unit: SourceUnit) -> str:
    """Render a SourceUnit back to Solidity text."""
    chunks: list[str] = []
    if unit.pragma:
        chunks.append(f"pragma solidity {unit.pragma};")
    for item in unit.items:
        if isinstance(item, ImportDirective):
            chunks.append(f'import "{item.path}";')
        elif isinstance(item, ContractDef):
            chunks.append(emit_contract(item))
        elif isinstance(item, OpaqueItem):
            chunks.append(item.text)
    return "\n".join(chunks) + "\n"


def emit_contract(contract: ContractDef) -> str:
    header = f"{contract.kind} {contract.name}"
    if contract.inheritance:
        header += f" is {contract.inheritance}"
    lines = [header + " {"]
    for member in contract.members:
        if isinstance(member, StateVar):
            lines.append(_INDENT + _emit_state_var(member))
        elif isinstance(member, FunctionDef):
            lines.append(_emit_function(member, 1))
        elif isinstance(member, OpaqueMember):
            lines.append(_INDENT + member.text)
    lines.append("}")
    return "\n".join(lines)


def _emit_state_var(var: StateVar) -> str:
    parts = [var.type_text, *var.modifiers, var.name]
    text = " ".join(parts)
    if var.init is not None:
        text += f" = {emit_expr(var.init)}"
    return text + ";"


def _emit_function(fn: FunctionDef, depth: int) -> str:
    pad = _INDENT * depth
    if fn.kind == "function" or (fn.kind == "fallback" and fn.name == ""):
        head = f"function {fn.name}" if fn.name else "function"
    else:
        head = fn.kind
    params = ", ".join(_emit_param(p) for p in fn.params)
    head += f"({params})"
    if fn.visibility:
        head += f" {fn.visibility}"
    if fn.mutability != "none":
        head += f" {fn.mutability}"
    for mod in fn.extra_modifiers:
        head += f" {mod}"
    if fn.returns_text is not None:
        head += f" returns ({fn.returns_text})"
    if fn.body is None:
        return pad + head + ";"
    lines = [pad + head + " {"]
    for stmt in fn.body:
        lines.append(emit_stmt(stmt, depth + 1))
    lines.append(pad + "}")
    return "\n".join(lines)


def _emit_param(p) -> str:
    parts = [p.type_text]
    if p.location:
        parts.append(p.location)
    if p.name:
        parts.append(p.name)
    return " ".join(parts)


def emit_stmt(stmt: Stmt, depth: int) -> str:
    pad = _INDENT * depth
    if isinstance(stmt, OpaqueStmt):
        return pad + stmt.text
    if isinstance(stmt, VarDeclStmt):
        return pad + _decl_text(stmt) + ";"
    if isinstance(stmt, AssignStmt):
        return pad + _assign_text(stmt) + ";"
    if isinstance(stmt, ExprStmt):
        return pad + emit_expr(stmt.expr) + ";"
    if isinstance(stmt, ReturnStmt):
        if stmt.value is None:
            return pad + "return;"
        return pad + f"return {emit_expr(stmt.value)};"
    if isinstance(stmt, IfStmt):
        lines = [pad + f"if ({emit_expr(stmt.cond)}) {{"]
        for s in stmt.then_body:
            lines.append(emit_stmt(s, depth + 1))
        if stmt.else_body is None:
            lines.append(pad + "}")
        else:
            lines.append(pad + "} else {")
            for s in stmt.else_body:
                lines.append(emit_stmt(s, depth + 1))
            lines.append(pad + "}")
        return "\n".join(lines)
    if isinstance(stmt, ForStmt):
        init = _inline_stmt(stmt.init)
        cond = emit_expr(stmt.cond) if stmt.cond is not None else ""
        post = _inline_stmt(stmt.post)
        lines = [pad + f"for ({init}; {cond}; {post}) {{"]
        for s in stmt.body:
            lines.append(emit_stmt(s, depth + 1))
        lines.append(pad + "}")
        return "\n".join(lines)
    if isinstance(stmt, BlockStmt):
        lines = [pad + "{"]
        for s in stmt.body:
            lines.append(emit_stmt(s, depth + 1))
        lines.append(pad + "}")
        return "\n".join(lines)
    raise TypeError(f"cannot emit statement {stmt!r}")


def _inline_stmt(stmt) -> str:
    if stmt is None:
        return ""
    if isinstance(stmt, VarDeclStmt):
        return _decl_text(stmt)
    if isinstance(stmt, AssignStmt):
        return _assign_text(stmt)
    if isinstance(stmt, ExprStmt):
        return emit_expr(stmt.expr)
    raise TypeError(f"cannot inline statement {stmt!r}")


def _decl_text(stmt: VarDeclStmt) -> str:
    parts = [stmt.type_text]
    if stmt.location:
        parts.append(stmt.location)
    parts.append(stmt.name)
    text = " ".join(parts)
    if stmt.init is not None:
        text += f" = {emit_expr(stmt.init)}"
    return text


def _assign_text(stmt: AssignStmt) -> str:
    return f"{emit_expr(stmt.target)} {stmt.op} {emit_expr(stmt.value)}"


def emit_expr(expr: Expr, parent_prec: int = 0, right_side: bool = False) -> str:
    if isinstance(expr, StringLit):
        return expr.raw
    if isinstance(expr, (NumberLit, AddressLit)):
        return expr.raw
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, This):
        return "this"
    if isinstance(expr, Member):
        return f"{emit_expr(expr.obj, _UNARY_PREC)}.{expr.name}"
    if isinstance(expr, Index):
        return f"{emit_expr(expr.obj, _UNARY_PREC)}[{emit_expr(expr.index)}]"
    if isinstance(expr, Call):
        args = ", ".join(emit_expr(a) for a in expr.args)
        return f"{emit_expr(expr.callee, _UNARY_PREC)}({args})"
    if isinstance(expr, Unary):
        inner = emit_expr(expr.operand, _UNARY_PREC)
        if isinstance(expr.operand, Unary):
            inner = f"({inner})"  # avoid "--x" lexing as a decrement
        return f"{expr.op}{inner}"
    if isinstance(expr, Binary):
        prec = _PRECEDENCE[expr.op]
        left = emit_expr(expr.left, prec, right_side=False)
        right = emit_expr(expr.right, prec, right_side=True)
        text = f"{left} {expr.op} {right}"
        if prec < parent_prec or (prec == parent_prec and right_side):
            return f"({text})"
        return text
    raise TypeError(f"cannot emit expression {expr!r}")
