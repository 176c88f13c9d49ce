"""Closed-world partial evaluation of transfer destinations.

Recovers the concrete beneficiary address behind an obfuscated transfer
sink without compiling or deploying anything: literal state variables are
substituted, pure/view helpers are inlined and executed, string-fragment
concatenations are folded, per-character hex-decode loops are run to
completion, and imported contracts are resolved from an offline snapshot.

Evaluation never throws for contract-content reasons; every failure mode
is reported as an Unresolved status with a machine-readable reason.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..hashing import checksum_from_int
from ..solidity import (
    AddressLit, AssignStmt, Binary, BlockStmt, BoolLit, Call, ContractDef,
    Expr, ExprStmt, ForStmt, FunctionDef, Ident, IfStmt, Index, Member,
    NumberLit, OpaqueStmt, ReturnStmt, SolSyntaxError, SourceUnit, StateVar,
    Stmt, StringLit, This, Unary, VarDeclStmt, parse_source,
)
from .imports import ImportStore
from .sinks import SinkSite, enclosing_function

RESOLVED = "Resolved"
SKIPPED_CALLER_REFUND = "SkippedCallerRefund"
UNRESOLVED = "Unresolved"

MISSING_IMPORT = "MissingImport"
NON_CONSTANT = "NonConstantExpression"
UNSUPPORTED = "UnsupportedConstruct"
PARSE_FAILURE = "ParseFailure"

LOOP_ITERATION_CAP = 10_000
_CALL_DEPTH_CAP = 32
_TRACE_CAP = 200
_ADDRESS_MASK = (1 << 160) - 1


@dataclass(frozen=True)
class AddressResolution:
    """Outcome of de-obfuscating one transfer destination."""

    status: str  # RESOLVED | SKIPPED_CALLER_REFUND | UNRESOLVED
    address: Optional[str] = None  # checksummed 0x + 40 hex when resolved
    trace: tuple[str, ...] = ()
    reason: Optional[str] = None   # failure category when unresolved

    @property
    def resolved(self) -> bool:
        return self.status == RESOLVED


class _Problem(Exception):
    def __init__(self, reason: str, detail: str):
        self.reason = reason
        self.detail = detail
        super().__init__(f"{reason}: {detail}")


# runtime value markers
class _Caller:
    """Destination is the transaction sender (or the recorded owner)."""


class _SelfAddress:
    """The contract's own address."""


@dataclass(frozen=True)
class _Address:
    value: int


@dataclass(frozen=True)
class _Instance:
    """A state variable holding a contract-typed reference."""
    type_name: str


@dataclass(frozen=True)
class _Unknown:
    reason: str
    detail: str


class _RawInt(int):
    """Integer that remembers its literal spelling, so string(x) on a
    hex-literal fragment can recover the original digits."""

    raw: str

    def __new__(cls, value: int, raw: str):
        obj = super().__new__(cls, value)
        obj.raw = raw
        return obj


_CALLER = _Caller()
_SELF = _SelfAddress()

_UINT_CASTS = {f"uint{n}": n for n in range(8, 257, 8)}
_UINT_CASTS["uint"] = 256


class _Context:
    """Per-contract evaluation state: resolved state variables, the import
    snapshot, a shared step budget, and the evaluation trace."""

    def __init__(self, unit: SourceUnit, contract: ContractDef,
                 imports: ImportStore, trace: list[str], budget: list[int]):
        self.unit = unit
        self.contract = contract
        self.imports = imports
        self.trace = trace
        self.budget = budget  # single-element mutable fuel counter
        self.state = _initial_state(contract, self)

    def note(self, message: str) -> None:
        if len(self.trace) < _TRACE_CAP:
            self.trace.append(message)

    def spend(self, amount: int = 1) -> None:
        self.budget[0] -= amount
        if self.budget[0] < 0:
            raise _Problem(UNSUPPORTED, "evaluation step budget exhausted")


def _initial_state(contract: ContractDef, ctx: _Context) -> dict[str, object]:
    state: dict[str, object] = {}
    for var in contract.state_vars:
        if var.init is not None:
            try:
                state[var.name] = _eval(var.init, ctx, {}, depth=0)
            except _Problem as exc:
                state[var.name] = _Unknown(exc.reason, exc.detail)
        elif _is_contract_type(var.type_text):
            state[var.name] = _Instance(var.type_text)
        else:
            state[var.name] = _zero_value(var.type_text)
    ctor = next((f for f in contract.functions if f.kind == "constructor"), None)
    if ctor is not None and ctor.body is not None:
        for name in _msg_sender_assignments(ctor.body):
            state[name] = _CALLER
            ctx.note(f"state {name}: set to the deployer in the constructor")
    return state


def _msg_sender_assignments(body: tuple[Stmt, ...]) -> list[str]:
    names: list[str] = []
    for stmt in body:
        if isinstance(stmt, AssignStmt) and stmt.op == "=" \
                and isinstance(stmt.target, Ident) and _is_msg_sender(stmt.value):
            names.append(stmt.target.name)
        elif isinstance(stmt, IfStmt):
            names.extend(_msg_sender_assignments(stmt.then_body))
            if stmt.else_body:
                names.extend(_msg_sender_assignments(stmt.else_body))
        elif isinstance(stmt, BlockStmt):
            names.extend(_msg_sender_assignments(stmt.body))
    return names


def _is_msg_sender(expr: Expr) -> bool:
    if isinstance(expr, Member) and expr.name == "sender" \
            and isinstance(expr.obj, Ident) and expr.obj.name == "msg":
        return True
    if isinstance(expr, Call) and isinstance(expr.callee, Ident) \
            and expr.callee.name in ("payable", "address") and len(expr.args) == 1:
        return _is_msg_sender(expr.args[0])
    return False


def _is_contract_type(type_text: str) -> bool:
    head = type_text.split()[0] if type_text else ""
    if not head or not head[0].isalpha():
        return False
    from ..solidity.lexer import ELEMENTARY_TYPES
    return head not in ELEMENTARY_TYPES and head[0].isupper() or (
        head not in ELEMENTARY_TYPES and not head.startswith("mapping"))


def _zero_value(type_text: str):
    head = type_text.split()[0] if type_text else ""
    if head.startswith(("uint", "int")):
        return 0
    if head == "bool":
        return False
    if head == "string":
        return ""
    if head in ("bytes",) or head.startswith("bytes"):
        return b""
    if head == "address":
        return _Address(0)
    return _Unknown(UNSUPPORTED, f"no default value for type {type_text!r}")


# --- public entry points ----------------------------------------------------


def evaluate_address(unit: SourceUnit, sink: SinkSite,
                     imports: Optional[ImportStore] = None) -> AddressResolution:
    """Partially evaluate a sink's destination expression.

    Returns Resolved with the checksummed address, SkippedCallerRefund for
    caller/owner destinations, or Unresolved with a failure reason.
    """
    imports = imports if imports is not None else ImportStore()
    trace: list[str] = []
    budget = [500_000]
    try:
        contract, fn = enclosing_function(unit, sink)
    except ValueError as exc:
        return AddressResolution(status=UNRESOLVED, trace=(str(exc),),
                                 reason=UNSUPPORTED)
    ctx = _Context(unit, contract, imports, trace, budget)
    try:
        locals_env: dict[str, object] = {
            p.name: _Unknown(NON_CONSTANT, f"function parameter {p.name}")
            for p in fn.params if p.name
        }
        assert fn.body is not None
        _exec_to_sink(fn.body, sink.path, ctx, locals_env)
        value = _eval(sink.dest_expr, ctx, locals_env, depth=0)
        return _resolution_from_value(value, ctx)
    except _Problem as exc:
        ctx.note(exc.detail)
        return AddressResolution(status=UNRESOLVED, trace=tuple(trace),
                                 reason=exc.reason)


def evaluate_probe(text: str, imports: Optional[ImportStore] = None,
                   contract_name: Optional[str] = None) -> AddressResolution:
    """Evaluate the value returned by a probe function in rewritten source.

    Picks the last zero-argument probe named getAddress (or getAddress<N>)
    in the named contract, mirroring how the probe would be invoked after
    deployment.
    """
    imports = imports if imports is not None else ImportStore()
    try:
        unit = parse_source(text)
    except SolSyntaxError as exc:
        return AddressResolution(status=UNRESOLVED, trace=(str(exc),),
                                 reason=PARSE_FAILURE)
    contract = unit.contract(contract_name) if contract_name else None
    candidates: list[tuple[ContractDef, FunctionDef]] = []
    for c in unit.contracts:
        if contract is not None and c is not contract:
            continue
        for f in c.functions:
            if f.name.startswith("getAddress") and not f.params and f.body:
                candidates.append((c, f))
    if not candidates:
        return AddressResolution(status=UNRESOLVED, trace=("no probe function",),
                                 reason=UNSUPPORTED)
    c, probe = candidates[-1]
    trace: list[str] = []
    ctx = _Context(unit, c, imports, trace, [500_000])
    try:
        result = _call_function(probe, [], ctx, depth=0)
        return _resolution_from_value(result, ctx)
    except _Problem as exc:
        ctx.note(exc.detail)
        return AddressResolution(status=UNRESOLVED, trace=tuple(trace),
                                 reason=exc.reason)


def _resolution_from_value(value: object, ctx: _Context) -> AddressResolution:
    if isinstance(value, _Unknown):
        ctx.note(value.detail)
        return AddressResolution(status=UNRESOLVED, trace=tuple(ctx.trace),
                                 reason=value.reason)
    if value is _CALLER:
        ctx.note("destination is the caller or recorded owner; not a scam sink")
        return AddressResolution(status=SKIPPED_CALLER_REFUND,
                                 trace=tuple(ctx.trace))
    if isinstance(value, str):
        parsed = _parse_address_text(value)
        if parsed is None:
            ctx.note(f"destination string is not an address: {value[:64]!r}")
            return AddressResolution(status=UNRESOLVED, trace=tuple(ctx.trace),
                                     reason=UNSUPPORTED)
        value = _Address(parsed)
    if isinstance(value, _Address):
        addr = checksum_from_int(value.value)
        ctx.note(f"destination resolves to {addr}")
        return AddressResolution(status=RESOLVED, address=addr,
                                 trace=tuple(ctx.trace))
    if value is _SELF:
        ctx.note("destination is the contract itself")
        return AddressResolution(status=UNRESOLVED, trace=tuple(ctx.trace),
                                 reason=UNSUPPORTED)
    ctx.note(f"destination evaluated to non-address {type(value).__name__}")
    return AddressResolution(status=UNRESOLVED, trace=tuple(ctx.trace),
                             reason=UNSUPPORTED)


def _parse_address_text(text: str) -> Optional[int]:
    bare = text[2:] if text[:2].lower() == "0x" else text
    if len(bare) == 40 and all(c in "0123456789abcdefABCDEF" for c in bare):
        return int(bare, 16)
    return None


# --- statement execution -----------------------------------------------------


def _exec_to_sink(body: tuple[Stmt, ...], path, ctx: _Context,
                  env: dict[str, object]) -> None:
    """Execute statements up to (not including) the sink statement,
    binding locals along the sink's branch path."""
    if not path:
        return
    index, _ = path[0]
    for i, stmt in enumerate(body[:index]):
        _exec_stmt(stmt, ctx, env, strict=False)
    target = body[index]
    if len(path) == 1:
        return  # sink statement itself
    branch = path[1]
    if isinstance(target, IfStmt):
        # the sink pins which branch executed; the condition value is moot
        sub = target.then_body if path[0][1] == "then" else (target.else_body or ())
        _exec_to_sink(sub, path[1:], ctx, env)
    elif isinstance(target, ForStmt):
        if target.init is not None:
            _exec_stmt(target.init, ctx, env, strict=False)
        _exec_to_sink(target.body, path[1:], ctx, env)
    elif isinstance(target, BlockStmt):
        _exec_to_sink(target.body, path[1:], ctx, env)
    else:
        del branch


def _exec_stmt(stmt: Stmt, ctx: _Context, env: dict[str, object],
               strict: bool, depth: int = 0):
    """Execute one statement. Returns ("ret", value) on a return.

    strict mode (inside inlined function calls) propagates problems;
    lenient mode (walking the sink's enclosing body) poisons affected
    locals instead, so unrelated non-constant statements cannot spoil
    destination recovery.
    """
    ctx.spend()
    if isinstance(stmt, VarDeclStmt):
        if stmt.init is None:
            env[stmt.name] = _zero_value(stmt.type_text) \
                if not _is_contract_type(stmt.type_text) else _Instance(stmt.type_text)
            return None
        try:
            env[stmt.name] = _eval(stmt.init, ctx, env, depth)
        except _Problem as exc:
            if strict:
                raise
            env[stmt.name] = _Unknown(exc.reason, exc.detail)
        return None
    if isinstance(stmt, AssignStmt):
        _exec_assign(stmt, ctx, env, strict, depth)
        return None
    if isinstance(stmt, ReturnStmt):
        value = _eval(stmt.value, ctx, env, depth) if stmt.value is not None else None
        return ("ret", value)
    if isinstance(stmt, ExprStmt):
        try:
            _eval(stmt.expr, ctx, env, depth)
        except _Problem:
            if strict:
                raise
        return None
    if isinstance(stmt, IfStmt):
        try:
            cond = _require_concrete(_eval(stmt.cond, ctx, env, depth))
        except _Problem as exc:
            if strict:
                raise
            _poison_assigned(stmt, env, exc)
            return None
        if not isinstance(cond, bool):
            if strict:
                raise _Problem(UNSUPPORTED, "non-boolean condition")
            _poison_assigned(stmt, env, _Problem(UNSUPPORTED, "non-boolean condition"))
            return None
        branch = stmt.then_body if cond else (stmt.else_body or ())
        return _exec_block(branch, ctx, env, strict, depth)
    if isinstance(stmt, ForStmt):
        return _exec_for(stmt, ctx, env, strict, depth)
    if isinstance(stmt, BlockStmt):
        return _exec_block(stmt.body, ctx, env, strict, depth)
    if isinstance(stmt, OpaqueStmt):
        if strict:
            raise _Problem(UNSUPPORTED, f"opaque statement: {stmt.text[:60]!r}")
        _poison_opaque(stmt, env)
        return None
    raise _Problem(UNSUPPORTED, f"cannot execute {type(stmt).__name__}")


def _exec_block(body: tuple[Stmt, ...], ctx: _Context, env: dict[str, object],
                strict: bool, depth: int):
    for stmt in body:
        result = _exec_stmt(stmt, ctx, env, strict, depth)
        if result is not None:
            return result
    return None


def _exec_for(stmt: ForStmt, ctx: _Context, env: dict[str, object],
              strict: bool, depth: int):
    if stmt.init is not None:
        _exec_stmt(stmt.init, ctx, env, strict, depth)
    iterations = 0
    while True:
        if stmt.cond is not None:
            try:
                cond = _require_concrete(_eval(stmt.cond, ctx, env, depth))
            except _Problem as exc:
                if strict:
                    raise
                _poison_assigned(stmt, env, exc)
                return None
            if not isinstance(cond, bool):
                raise _Problem(UNSUPPORTED, "non-boolean loop condition")
            if not cond:
                break
        elif iterations >= LOOP_ITERATION_CAP:
            raise _Problem(UNSUPPORTED, "unbounded loop")
        result = _exec_block(stmt.body, ctx, env, strict, depth)
        if result is not None:
            return result
        if stmt.post is not None:
            _exec_stmt(stmt.post, ctx, env, strict, depth)
        iterations += 1
        if iterations > LOOP_ITERATION_CAP:
            raise _Problem(UNSUPPORTED,
                           f"loop exceeded {LOOP_ITERATION_CAP} iterations")
    if iterations:
        ctx.note(f"loop ran {iterations} iterations")
    return None


def _exec_assign(stmt: AssignStmt, ctx: _Context, env: dict[str, object],
                 strict: bool, depth: int) -> None:
    if not isinstance(stmt.target, Ident):
        if strict:
            raise _Problem(UNSUPPORTED, "assignment to a non-identifier")
        return  # index/member stores don't feed the subset's destinations
    name = stmt.target.name
    try:
        rhs = _eval(stmt.value, ctx, env, depth)
        if stmt.op == "=":
            value = rhs
        else:
            current = _lookup(name, ctx, env)
            value = _binary_op(stmt.op[0], _require_concrete(current),
                               _require_concrete(rhs))
    except _Problem as exc:
        if strict:
            raise
        env[name] = _Unknown(exc.reason, exc.detail)
        return
    env[name] = value


def _poison_assigned(stmt: Stmt, env: dict[str, object], exc: _Problem) -> None:
    for name in _assigned_names(stmt):
        env[name] = _Unknown(exc.reason, f"assigned under unresolved control flow "
                                         f"({exc.detail})")


def _poison_opaque(stmt: OpaqueStmt, env: dict[str, object]) -> None:
    # an opaque statement may mutate any identifier it mentions
    if not any(marker in stmt.text for marker in ("=", "++", "--")):
        return
    import re
    mentioned = set(re.findall(r"[A-Za-z_$][A-Za-z0-9_$]*", stmt.text))
    for name in list(env):
        if name in mentioned:
            env[name] = _Unknown(UNSUPPORTED,
                                 f"possibly mutated by opaque statement")


def _assigned_names(stmt: Stmt) -> set[str]:
    names: set[str] = set()
    if isinstance(stmt, AssignStmt) and isinstance(stmt.target, Ident):
        names.add(stmt.target.name)
    elif isinstance(stmt, VarDeclStmt):
        names.add(stmt.name)
    elif isinstance(stmt, IfStmt):
        for sub in (stmt.then_body, stmt.else_body or ()):
            for s in sub:
                names |= _assigned_names(s)
    elif isinstance(stmt, (ForStmt, BlockStmt)):
        sub = stmt.body if isinstance(stmt, BlockStmt) else \
            tuple(x for x in (stmt.init, stmt.post) if x is not None) + stmt.body
        for s in sub:
            names |= _assigned_names(s)
    return names


# --- expression evaluation ----------------------------------------------------


def _require_concrete(value: object) -> object:
    if isinstance(value, _Unknown):
        raise _Problem(value.reason, value.detail)
    return value


def _lookup(name: str, ctx: _Context, env: dict[str, object]) -> object:
    if name in env:
        return env[name]
    if name in ctx.state:
        return ctx.state[name]
    raise _Problem(UNSUPPORTED, f"unknown identifier {name!r}")


def _eval(expr: Expr, ctx: _Context, env: dict[str, object], depth: int) -> object:
    ctx.spend()
    if isinstance(expr, StringLit):
        return expr.value
    if isinstance(expr, NumberLit):
        return _RawInt(expr.value, expr.raw)
    if isinstance(expr, AddressLit):
        return _Address(expr.value)
    if isinstance(expr, BoolLit):
        return expr.value
    if isinstance(expr, This):
        return _SELF
    if isinstance(expr, Ident):
        return _require_concrete(_lookup(expr.name, ctx, env))
    if isinstance(expr, Member):
        return _eval_member(expr, ctx, env, depth)
    if isinstance(expr, Index):
        return _eval_index(expr, ctx, env, depth)
    if isinstance(expr, Call):
        return _eval_call(expr, ctx, env, depth)
    if isinstance(expr, Unary):
        return _eval_unary(expr, ctx, env, depth)
    if isinstance(expr, Binary):
        return _eval_binary(expr, ctx, env, depth)
    raise _Problem(UNSUPPORTED, f"cannot evaluate {type(expr).__name__}")


def _eval_member(expr: Member, ctx: _Context, env: dict[str, object],
                 depth: int) -> object:
    if isinstance(expr.obj, Ident):
        base = expr.obj.name
        if base == "msg":
            if expr.name == "sender":
                return _CALLER
            raise _Problem(NON_CONSTANT, f"msg.{expr.name} is transaction-dependent")
        if base in ("block", "tx"):
            raise _Problem(NON_CONSTANT, f"{base}.{expr.name} is chain-dependent")
    obj = _eval(expr.obj, ctx, env, depth)
    if expr.name == "balance" and (obj is _SELF or isinstance(obj, (_Address, _SelfAddress))):
        raise _Problem(NON_CONSTANT, "contract balance is runtime state")
    if isinstance(obj, _Instance):
        target_ctx = _instance_context(obj, ctx)
        if expr.name in target_ctx.state:
            return _require_concrete(target_ctx.state[expr.name])
        raise _Problem(UNSUPPORTED,
                       f"no member {expr.name!r} on {obj.type_name}")
    if expr.name == "length":
        if isinstance(obj, (bytes, str)):
            return len(obj)
    raise _Problem(UNSUPPORTED, f"unsupported member access .{expr.name}")


def _eval_index(expr: Index, ctx: _Context, env: dict[str, object],
                depth: int) -> object:
    obj = _eval(expr.obj, ctx, env, depth)
    idx = _eval(expr.index, ctx, env, depth)
    if not isinstance(idx, int) or isinstance(idx, bool):
        raise _Problem(UNSUPPORTED, "non-integer index")
    if isinstance(obj, bytes):
        if 0 <= idx < len(obj):
            return obj[idx]
        raise _Problem(UNSUPPORTED, f"index {idx} out of range")
    if isinstance(obj, str):
        if 0 <= idx < len(obj):
            return obj[idx]
        raise _Problem(UNSUPPORTED, f"index {idx} out of range")
    raise _Problem(UNSUPPORTED, "indexing a non-sequence")


def _eval_call(expr: Call, ctx: _Context, env: dict[str, object],
               depth: int) -> object:
    callee = expr.callee
    if isinstance(callee, Ident):
        name = callee.name
        if name in ("payable", "address"):
            return _to_address(_eval_single(expr, ctx, env, depth), ctx)
        if name in _UINT_CASTS:
            return _uint_cast(_eval_single(expr, ctx, env, depth), _UINT_CASTS[name])
        if name == "string":
            return _string_cast(_eval_single(expr, ctx, env, depth))
        if name == "bytes":
            return _bytes_cast(_eval_single(expr, ctx, env, depth))
        if name in ("require", "assert"):
            return None  # checked at runtime; no value to fold
        fn = ctx.contract.function(name)
        if fn is not None:
            args = [_eval(a, ctx, env, depth) for a in expr.args]
            ctx.note(f"inline {fn.signature}")
            return _call_function(fn, args, ctx, depth + 1)
        raise _Problem(UNSUPPORTED, f"call to unknown function {name!r}")
    if isinstance(callee, Member):
        if isinstance(callee.obj, Ident) and callee.obj.name == "abi":
            if callee.name == "encodePacked":
                return _encode_packed(
                    [_eval(a, ctx, env, depth) for a in expr.args])
            raise _Problem(UNSUPPORTED, f"abi.{callee.name} not supported")
        obj = _eval(callee.obj, ctx, env, depth)
        if isinstance(obj, _Instance):
            target_ctx = _instance_context(obj, ctx)
            fn = target_ctx.contract.function(callee.name)
            if fn is None:
                raise _Problem(UNSUPPORTED,
                               f"{obj.type_name} has no function {callee.name!r}")
            args = [_eval(a, ctx, env, depth) for a in expr.args]
            ctx.note(f"inline {obj.type_name}.{fn.signature} from import")
            return _call_function(fn, args, target_ctx, depth + 1)
        raise _Problem(UNSUPPORTED, f"unsupported method call .{callee.name}()")
    raise _Problem(UNSUPPORTED, "unsupported call form")


def _eval_single(expr: Call, ctx: _Context, env: dict[str, object],
                 depth: int) -> object:
    if len(expr.args) != 1:
        raise _Problem(UNSUPPORTED, "cast expects exactly one argument")
    return _eval(expr.args[0], ctx, env, depth)


def _call_function(fn: FunctionDef, args: list[object], ctx: _Context,
                   depth: int) -> object:
    if depth > _CALL_DEPTH_CAP:
        raise _Problem(UNSUPPORTED, "call depth limit exceeded")
    if fn.body is None:
        raise _Problem(UNSUPPORTED, f"{fn.signature} has no body")
    if len(args) != len(fn.params):
        raise _Problem(UNSUPPORTED, f"arity mismatch calling {fn.signature}")
    frame: dict[str, object] = {}
    for param, arg in zip(fn.params, args):
        if param.name:
            frame[param.name] = arg
    result = _exec_block(fn.body, ctx, frame, strict=True, depth=depth)
    if result is None:
        raise _Problem(UNSUPPORTED, f"{fn.signature} returned no value")
    return result[1]


def _instance_context(instance: _Instance, ctx: _Context) -> _Context:
    """Context for a contract-typed reference: same unit first, then the
    import snapshot."""
    type_name = instance.type_name.split()[0]
    local = ctx.unit.contract(type_name)
    if local is not None and local is not ctx.contract:
        return _Context(ctx.unit, local, ctx.imports, ctx.trace, ctx.budget)
    missing: list[str] = []
    for imp in ctx.unit.imports:
        source = ctx.imports.get(imp.path)
        if source is None:
            missing.append(imp.path)
            continue
        cached = ctx.imports._parsed_cache.get(imp.path)
        if cached is None:
            try:
                cached = parse_source(source)
            except SolSyntaxError as exc:
                raise _Problem(PARSE_FAILURE,
                               f"imported file failed to parse: {exc}") from exc
            ctx.imports._parsed_cache[imp.path] = cached
        unit = cached  # type: ignore[assignment]
        found = unit.contract(type_name)
        if found is not None:
            ctx.note(f"resolved {type_name} from import {imp.path}")
            return _Context(unit, found, ctx.imports, ctx.trace, ctx.budget)
    if missing:
        raise _Problem(MISSING_IMPORT,
                       f"import not in snapshot: {missing[0]}")
    raise _Problem(UNSUPPORTED, f"contract {type_name!r} not found")


def _to_address(value: object, ctx: _Context) -> object:
    if isinstance(value, (_Address, _Caller, _SelfAddress)):
        return value
    if value is _CALLER:
        return value
    if isinstance(value, bool):
        raise _Problem(UNSUPPORTED, "cannot cast bool to address")
    if isinstance(value, int):
        return _Address(int(value) & _ADDRESS_MASK)
    if isinstance(value, str):
        parsed = _parse_address_text(value)
        if parsed is None:
            raise _Problem(UNSUPPORTED,
                           f"string is not address-shaped: {value[:48]!r}")
        ctx.note(f"decoded address text {value[:48]!r}")
        return _Address(parsed)
    if isinstance(value, bytes):
        return _to_address(value.decode("ascii", errors="replace"), ctx)
    raise _Problem(UNSUPPORTED, f"cannot cast {type(value).__name__} to address")


def _uint_cast(value: object, bits: int) -> int:
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return int(value) & ((1 << bits) - 1)
    if isinstance(value, _Address):
        return value.value & ((1 << bits) - 1)
    raise _Problem(UNSUPPORTED, f"cannot cast {type(value).__name__} to uint{bits}")


def _string_cast(value: object) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bytes):
        try:
            return value.decode("ascii")
        except UnicodeDecodeError as exc:
            raise _Problem(UNSUPPORTED, "non-ascii bytes in string cast") from exc
    if isinstance(value, _RawInt):
        raw = value.raw
        return raw[2:] if raw[:2].lower() == "0x" else raw
    if isinstance(value, int):
        raise _Problem(UNSUPPORTED, "string cast of a computed integer")
    raise _Problem(UNSUPPORTED, f"cannot cast {type(value).__name__} to string")


def _bytes_cast(value: object) -> bytes:
    if isinstance(value, bytes):
        return value
    if isinstance(value, str):
        return value.encode("utf-8")
    raise _Problem(UNSUPPORTED, f"cannot cast {type(value).__name__} to bytes")


def _encode_packed(values: list[object]) -> str:
    parts: list[str] = []
    for value in values:
        if isinstance(value, str):
            parts.append(value)
        elif isinstance(value, bytes):
            parts.append(value.decode("ascii", errors="replace"))
        elif isinstance(value, _RawInt):
            raw = value.raw
            parts.append(raw[2:] if raw[:2].lower() == "0x" else raw)
        else:
            raise _Problem(UNSUPPORTED,
                           f"cannot pack {type(value).__name__} value")
    return "".join(parts)


def _eval_unary(expr: Unary, ctx: _Context, env: dict[str, object],
                depth: int) -> object:
    value = _eval(expr.operand, ctx, env, depth)
    if expr.op == "!":
        if isinstance(value, bool):
            return not value
        raise _Problem(UNSUPPORTED, "! on a non-boolean")
    if expr.op == "-":
        if isinstance(value, int) and not isinstance(value, bool):
            return -int(value)
    if expr.op == "~":
        if isinstance(value, int) and not isinstance(value, bool):
            return ~int(value)
    raise _Problem(UNSUPPORTED, f"unary {expr.op} unsupported here")


def _eval_binary(expr: Binary, ctx: _Context, env: dict[str, object],
                 depth: int) -> object:
    if expr.op in ("&&", "||"):
        left = _eval(expr.left, ctx, env, depth)
        if not isinstance(left, bool):
            raise _Problem(UNSUPPORTED, f"{expr.op} on a non-boolean")
        if expr.op == "&&" and not left:
            return False
        if expr.op == "||" and left:
            return True
        right = _eval(expr.right, ctx, env, depth)
        if not isinstance(right, bool):
            raise _Problem(UNSUPPORTED, f"{expr.op} on a non-boolean")
        return right
    left = _eval(expr.left, ctx, env, depth)
    right = _eval(expr.right, ctx, env, depth)
    return _binary_op(expr.op, left, right)


def _binary_op(op: str, left: object, right: object) -> object:
    if op == "+" and isinstance(left, str) and isinstance(right, str):
        return left + right
    if op in ("==", "!="):
        eq = _values_equal(left, right)
        return eq if op == "==" else not eq
    if isinstance(left, bool) or isinstance(right, bool):
        raise _Problem(UNSUPPORTED, f"{op} on boolean operands")
    if isinstance(left, int) and isinstance(right, int):
        a, b = int(left), int(right)
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        if op == "/":
            if b == 0:
                raise _Problem(UNSUPPORTED, "division by zero")
            return a // b
        if op == "%":
            if b == 0:
                raise _Problem(UNSUPPORTED, "modulo by zero")
            return a % b
        if op == "**":
            if b > 4096 or a.bit_length() * max(b, 1) > 100_000:
                raise _Problem(UNSUPPORTED, "exponentiation too large")
            return a ** b
        if op == "<":
            return a < b
        if op == ">":
            return a > b
        if op == "<=":
            return a <= b
        if op == ">=":
            return a >= b
        if op == "&":
            return a & b
        if op == "|":
            return a | b
        if op == "^":
            return a ^ b
        if op == "<<":
            if b > 4096:
                raise _Problem(UNSUPPORTED, "shift too large")
            return a << b
        if op == ">>":
            return a >> b
    raise _Problem(UNSUPPORTED,
                   f"{op} on {type(left).__name__}/{type(right).__name__}")


def _values_equal(left: object, right: object) -> bool:
    if isinstance(left, _Address) and isinstance(right, _Address):
        return left.value == right.value
    if type(left) is type(right) or (
            isinstance(left, int) and isinstance(right, int)):
        return left == right
    if left is _CALLER or right is _CALLER:
        raise _Problem(NON_CONSTANT, "comparison against the caller")
    raise _Problem(UNSUPPORTED, "comparison of unrelated types")
