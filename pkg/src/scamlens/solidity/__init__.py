"""Solidity-subset frontend: lexer, parser, emitter, file-type detection."""

from .detect import detect_solidity
from .emitter import emit_contract, emit_expr, emit_source
from .errors import SolSyntaxError
from .lexer import Token, tokenize
from .nodes import (
    AddressLit, AssignStmt, Binary, BlockStmt, BoolLit, Call, ContractDef,
    Expr, ExprStmt, ForStmt, FunctionDef, Ident, IfStmt, ImportDirective,
    Index, Member, NumberLit, OpaqueItem, OpaqueMember, OpaqueStmt, Param,
    ReturnStmt, SourceUnit, StateVar, Stmt, StringLit, This, Unary,
    VarDeclStmt,
)
from .parser import parse_source

__all__ = [
    "AddressLit", "AssignStmt", "Binary", "BlockStmt", "BoolLit", "Call",
    "ContractDef", "Expr", "ExprStmt", "ForStmt", "FunctionDef", "Ident",
    "IfStmt", "ImportDirective", "Index", "Member", "NumberLit", "OpaqueItem",
    "OpaqueMember", "OpaqueStmt", "Param", "ReturnStmt", "SolSyntaxError",
    "SourceUnit", "StateVar", "Stmt", "StringLit", "This", "Token", "Unary",
    "VarDeclStmt", "detect_solidity", "emit_contract", "emit_expr",
    "emit_source", "parse_source", "tokenize",
]
