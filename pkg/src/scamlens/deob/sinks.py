"""Locating fund-draining transfer statements in parsed contracts."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from ..solidity import (
    AssignStmt, Binary, BlockStmt, Call, ContractDef, Expr, ExprStmt, ForStmt,
    FunctionDef, IfStmt, Index, Member, ReturnStmt, SourceUnit, Stmt, Unary,
    VarDeclStmt, emit_expr,
)

# a path step addresses one statement: (index, branch) where branch names
# the sub-body entered at that statement, or None for the statement itself
PathStep = tuple[int, Optional[str]]


@dataclass(frozen=True)
class SinkSite:
    """One transfer-call statement that moves funds out of the contract."""

    contract: str
    function: str  # full signature text, e.g. "start()"
    site: str      # human-readable statement locator
    dest_expr: Expr
    amount_expr: Expr
    path: tuple[PathStep, ...] = field(default=(), repr=False)

    @property
    def dest_text(self) -> str:
        return emit_expr(self.dest_expr)


def find_transfer_sinks(unit: SourceUnit) -> list[SinkSite]:
    """All transfer-call sites in source order, including ones nested
    under conditionals. Returns an empty list when there are none."""
    sinks: list[SinkSite] = []
    for contract in unit.contracts:
        for fn in contract.functions:
            if fn.body is None:
                continue
            for path, stmt in _walk_statements(fn.body, ()):
                for call in _transfer_calls(stmt):
                    dest = call.callee.obj  # type: ignore[union-attr]
                    sinks.append(SinkSite(
                        contract=contract.name,
                        function=fn.signature,
                        site=_path_text(fn.signature, path),
                        dest_expr=dest,
                        amount_expr=call.args[0],
                        path=path,
                    ))
    return sinks


def _walk_statements(body: tuple[Stmt, ...], prefix: tuple[PathStep, ...]
                     ) -> Iterator[tuple[tuple[PathStep, ...], Stmt]]:
    for i, stmt in enumerate(body):
        yield prefix + ((i, None),), stmt
        if isinstance(stmt, IfStmt):
            yield from _walk_statements(stmt.then_body, prefix + ((i, "then"),))
            if stmt.else_body is not None:
                yield from _walk_statements(stmt.else_body, prefix + ((i, "else"),))
        elif isinstance(stmt, ForStmt):
            yield from _walk_statements(stmt.body, prefix + ((i, "body"),))
        elif isinstance(stmt, BlockStmt):
            yield from _walk_statements(stmt.body, prefix + ((i, "block"),))


def _transfer_calls(stmt: Stmt) -> list[Call]:
    """Transfer calls syntactically inside this statement (not its
    nested block bodies, which are walked separately)."""
    exprs: list[Expr] = []
    if isinstance(stmt, ExprStmt):
        exprs.append(stmt.expr)
    elif isinstance(stmt, VarDeclStmt) and stmt.init is not None:
        exprs.append(stmt.init)
    elif isinstance(stmt, AssignStmt):
        exprs.extend((stmt.target, stmt.value))
    elif isinstance(stmt, ReturnStmt) and stmt.value is not None:
        exprs.append(stmt.value)
    elif isinstance(stmt, IfStmt):
        exprs.append(stmt.cond)
    elif isinstance(stmt, ForStmt) and stmt.cond is not None:
        exprs.append(stmt.cond)
    found: list[Call] = []
    for expr in exprs:
        _collect_transfers(expr, found)
    return found


def _collect_transfers(expr: Expr, out: list[Call]) -> None:
    if isinstance(expr, Call):
        if (isinstance(expr.callee, Member) and expr.callee.name == "transfer"
                and len(expr.args) == 1):
            out.append(expr)
        _collect_transfers(expr.callee, out)
        for arg in expr.args:
            _collect_transfers(arg, out)
    elif isinstance(expr, Member):
        _collect_transfers(expr.obj, out)
    elif isinstance(expr, Index):
        _collect_transfers(expr.obj, out)
        _collect_transfers(expr.index, out)
    elif isinstance(expr, Binary):
        _collect_transfers(expr.left, out)
        _collect_transfers(expr.right, out)
    elif isinstance(expr, Unary):
        _collect_transfers(expr.operand, out)


def _path_text(signature: str, path: tuple[PathStep, ...]) -> str:
    parts = [signature]
    for index, branch in path:
        parts.append(f"{index}" if branch is None else f"{index}:{branch}")
    return "/".join(parts)


def enclosing_function(unit: SourceUnit, sink: SinkSite) -> tuple[ContractDef, FunctionDef]:
    contract = unit.contract(sink.contract)
    if contract is None:
        raise ValueError(f"sink contract {sink.contract!r} not in unit")
    for fn in contract.functions:
        if fn.signature == sink.function:
            return contract, fn
    raise ValueError(f"sink function {sink.function!r} not in {sink.contract!r}")
