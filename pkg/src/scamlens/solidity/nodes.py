"""Syntax tree for the Solidity subset.

Equality on these nodes is structural; SourceUnit.raw_text is excluded so
that a unit compares equal to its re-parsed emission. Constructs outside
the subset are held verbatim in Opaque* nodes and re-emit byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

# --- expressions -----------------------------------------------------------


@dataclass(frozen=True)
class StringLit:
    value: str  # unescaped content
    raw: str    # lexeme including quotes


@dataclass(frozen=True)
class NumberLit:
    value: int
    raw: str    # lexeme; hex literals keep their exact digits and case

    @property
    def is_hex(self) -> bool:
        return self.raw[:2].lower() == "0x"


@dataclass(frozen=True)
class AddressLit:
    raw: str    # 0x + exactly 40 hex chars

    @property
    def value(self) -> int:
        return int(self.raw, 16)


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class This:
    pass


@dataclass(frozen=True)
class Member:
    obj: "Expr"
    name: str


@dataclass(frozen=True)
class Index:
    obj: "Expr"
    index: "Expr"


@dataclass(frozen=True)
class Call:
    callee: "Expr"
    args: tuple["Expr", ...]


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"


Expr = Union[
    StringLit, NumberLit, AddressLit, BoolLit, Ident, This,
    Member, Index, Call, Unary, Binary,
]

# --- statements ------------------------------------------------------------


@dataclass(frozen=True)
class VarDeclStmt:
    type_text: str
    location: Optional[str]  # memory | storage | calldata
    name: str
    init: Optional[Expr]


@dataclass(frozen=True)
class AssignStmt:
    target: Expr
    op: str  # "=", "+=", "-=", "*=", "/=", "%="
    value: Expr


@dataclass(frozen=True)
class IfStmt:
    cond: Expr
    then_body: tuple["Stmt", ...]
    else_body: Optional[tuple["Stmt", ...]]


@dataclass(frozen=True)
class ForStmt:
    init: Optional["Stmt"]
    cond: Optional[Expr]
    post: Optional["Stmt"]
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class ReturnStmt:
    value: Optional[Expr]


@dataclass(frozen=True)
class ExprStmt:
    expr: Expr


@dataclass(frozen=True)
class BlockStmt:
    body: tuple["Stmt", ...]


@dataclass(frozen=True)
class OpaqueStmt:
    text: str  # verbatim source slice


Stmt = Union[
    VarDeclStmt, AssignStmt, IfStmt, ForStmt, ReturnStmt,
    ExprStmt, BlockStmt, OpaqueStmt,
]

# --- declarations ----------------------------------------------------------


@dataclass(frozen=True)
class Param:
    type_text: str
    location: Optional[str]
    name: Optional[str]

    @property
    def sig_type(self) -> str:
        # signature form drops data location and the payable qualifier
        parts = [p for p in self.type_text.split() if p not in ("payable",)]
        return " ".join(parts)


@dataclass(frozen=True)
class FunctionDef:
    name: str
    kind: str = "function"  # function | constructor | receive | fallback
    params: tuple[Param, ...] = ()
    visibility: str = "public"
    mutability: str = "none"  # payable | pure | view | none
    extra_modifiers: tuple[str, ...] = ()
    returns_text: Optional[str] = None
    body: Optional[tuple[Stmt, ...]] = None  # None: declaration only

    @property
    def signature(self) -> str:
        return f"{self.name}({','.join(p.sig_type for p in self.params)})"


@dataclass(frozen=True)
class StateVar:
    type_text: str
    name: str
    modifiers: tuple[str, ...] = ()
    init: Optional[Expr] = None


@dataclass(frozen=True)
class OpaqueMember:
    text: str


ContractMember = Union[StateVar, FunctionDef, OpaqueMember]


@dataclass(frozen=True)
class ContractDef:
    name: str
    kind: str = "contract"  # contract | interface | library | abstract contract
    inheritance: Optional[str] = None
    members: tuple[ContractMember, ...] = ()

    @property
    def state_vars(self) -> tuple[StateVar, ...]:
        return tuple(m for m in self.members if isinstance(m, StateVar))

    @property
    def functions(self) -> tuple[FunctionDef, ...]:
        return tuple(m for m in self.members if isinstance(m, FunctionDef))

    def function(self, name: str) -> Optional[FunctionDef]:
        for f in self.functions:
            if f.name == name:
                return f
        return None


@dataclass(frozen=True)
class ImportDirective:
    path: str


@dataclass(frozen=True)
class OpaqueItem:
    text: str


UnitItem = Union[ImportDirective, ContractDef, OpaqueItem]


@dataclass(frozen=True)
class SourceUnit:
    items: tuple[UnitItem, ...]
    pragma: Optional[str] = None
    raw_text: str = field(compare=False, default="")

    @property
    def imports(self) -> tuple[ImportDirective, ...]:
        return tuple(i for i in self.items if isinstance(i, ImportDirective))

    @property
    def contracts(self) -> tuple[ContractDef, ...]:
        return tuple(i for i in self.items if isinstance(i, ContractDef))

    def contract(self, name: str) -> Optional[ContractDef]:
        for c in self.contracts:
            if c.name == name:
                return c
        return None
