"""Recursive-descent parser for the Solidity subset.

The grammar covers what arbitrage-bot contracts actually use: contracts
with state variables, functions, if/else, for-loops, local declarations,
assignments, returns, integer/string expressions, casts, and member
access. Anything else is captured verbatim as an opaque node so that
real-world (often malformed) corpus files still parse and re-emit
byte-identically.
"""

from __future__ import annotations

from typing import Optional

from .errors import SolSyntaxError
from .lexer import ELEMENTARY_TYPES, Token, tokenize
from .nodes import (
    AddressLit, AssignStmt, Binary, BlockStmt, BoolLit, Call, ContractDef,
    ExprStmt, ForStmt, FunctionDef, Ident, IfStmt, ImportDirective, Index,
    Member, NumberLit, OpaqueItem, OpaqueMember, OpaqueStmt, Param,
    ReturnStmt, SourceUnit, StateVar, StringLit, This, Unary, VarDeclStmt,
)

_VISIBILITY = ("public", "private", "internal", "external")
_MUTABILITY = ("pure", "view", "payable")
_STATEVAR_MODS = ("public", "private", "internal", "constant", "immutable", "override")
_CONTRACT_START = ("pragma", "import", "contract", "interface", "library", "abstract")
_FUNCTION_START = ("function", "constructor", "receive", "fallback")
_OPENERS = {"(": ")", "{": "}", "[": "]"}
_CLOSERS = {v: k for k, v in _OPENERS.items()}

# binary operator precedence levels, low to high
_BINARY_LEVELS = (
    ("||",), ("&&",), ("==", "!="), ("<", ">", "<=", ">="),
    ("|",), ("^",), ("&",), ("<<", ">>"), ("+", "-"), ("*", "/", "%"), ("**",),
)


class _Backtrack(Exception):
    pass


def parse_source(source: str) -> SourceUnit:
    """Parse UTF-8 Solidity text into a SourceUnit.

    Raises SolSyntaxError for unbalanced delimiters, malformed contract or
    function declarations, and lexical errors. Unknown constructs inside a
    well-delimited file never raise; they become opaque nodes.
    """
    tokens = tokenize(source)
    _check_balance(tokens)
    return _Parser(source, tokens).parse_unit()


def _check_balance(tokens: list[Token]) -> None:
    stack: list[Token] = []
    for tok in tokens:
        if tok.kind != "punct":
            continue
        if tok.text in _OPENERS:
            stack.append(tok)
        elif tok.text in _CLOSERS:
            if not stack or _OPENERS[stack[-1].text] != tok.text:
                raise SolSyntaxError(f"unbalanced {tok.text!r}", tok.line, tok.col)
            stack.pop()
    if stack:
        tok = stack[-1]
        raise SolSyntaxError(f"unclosed {tok.text!r}", tok.line, tok.col)


def _unescape(lexeme: str) -> str:
    body = lexeme[1:-1]
    out = []
    i = 0
    while i < len(body):
        c = body[i]
        if c == "\\" and i + 1 < len(body):
            nxt = body[i + 1]
            out.append({"n": "\n", "t": "\t", "r": "\r", "0": "\0"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def join_tokens(tokens: list[Token]) -> str:
    """Join token texts with deterministic spacing (idempotent under re-lex)."""
    parts: list[str] = []
    for tok in tokens:
        text = tok.text
        if parts and (
            text in (",", ")", "]", ";", ".")
            or parts[-1] in ("(", "[", ".")
        ):
            parts.append(text)
        elif parts:
            parts.append(" " + text)
        else:
            parts.append(text)
    return "".join(parts)


class _Parser:
    def __init__(self, source: str, tokens: list[Token]):
        self.source = source
        self.toks = tokens
        self.i = 0

    # -- cursor helpers ------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        j = min(self.i + offset, len(self.toks) - 1)
        return self.toks[j]

    def at(self, *texts: str) -> bool:
        return self.peek().text in texts and self.peek().kind != "string"

    def advance(self) -> Token:
        tok = self.toks[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect(self, text: str, what: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "string":
            raise SolSyntaxError(f"malformed {what}: expected {text!r}", tok.line, tok.col)
        return self.advance()

    def _take(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def _slice(self, start_tok: Token, end_tok: Token) -> str:
        return self.source[start_tok.pos:end_tok.pos + len(end_tok.text)]

    # -- unit ------------------------------------------------------------

    def parse_unit(self) -> SourceUnit:
        items: list = []
        pragma: Optional[str] = None
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.is_keyword("pragma"):
                directive = self._parse_pragma()
                if isinstance(directive, str):
                    if pragma is None and directive:
                        pragma = directive  # first solidity pragma wins
                else:
                    items.append(directive)
            elif tok.is_keyword("import"):
                items.append(self._parse_import())
            elif tok.is_keyword("contract", "interface", "library") or (
                tok.is_keyword("abstract") and self.peek(1).is_keyword("contract")
            ):
                items.append(self.parse_contract())
            elif tok.text == ";" and tok.kind == "punct":
                self.advance()
            else:
                items.append(OpaqueItem(self._capture_opaque(stop_words=_CONTRACT_START)))
        return SourceUnit(items=tuple(items), pragma=pragma, raw_text=self.source)

    def _parse_pragma(self):
        start = self.peek()
        self.advance()
        if not self.peek().is_keyword("solidity"):
            return OpaqueItem(self._capture_from(start))
        self.advance()
        version_start = self.peek().pos
        while not self.at(";") and self.peek().kind != "eof":
            self.advance()
        if self.peek().kind == "eof":
            raise SolSyntaxError("malformed pragma: missing ';'", start.line, start.col)
        semi = self.advance()
        return self.source[version_start:semi.pos].strip()

    def _parse_import(self) -> ImportDirective | OpaqueItem:
        start = self.peek()
        saved = self.i
        self.advance()
        if self.peek().kind == "string" and self.peek(1).text == ";":
            path_tok = self.advance()
            self.advance()
            return ImportDirective(path=_unescape(path_tok.text))
        self.i = saved
        return OpaqueItem(self._capture_opaque(stop_words=_CONTRACT_START))

    # -- contracts --------------------------------------------------------

    def parse_contract(self) -> ContractDef:
        kind = "abstract contract" if self._take("abstract") else None
        kw = self.advance()
        if kind is None:
            kind = kw.text
        name_tok = self.peek()
        if name_tok.kind != "ident":
            raise SolSyntaxError("malformed contract declaration: missing name",
                                 name_tok.line, name_tok.col)
        name = self.advance().text
        inheritance = None
        if self.at("is"):
            self.advance()
            inh_toks = []
            while not self.at("{") and self.peek().kind != "eof":
                inh_toks.append(self.advance())
            inheritance = join_tokens(inh_toks)
        self.expect("{", "contract declaration")
        members: list = []
        while not self.at("}") and self.peek().kind != "eof":
            member = self._parse_member()
            if member is not None:
                members.append(member)
        self.expect("}", "contract declaration")
        self._take(";")
        return ContractDef(name=name, kind=kind, inheritance=inheritance,
                           members=tuple(members))

    def _parse_member(self):
        tok = self.peek()
        if tok.text == ";" and tok.kind == "punct":
            self.advance()
            return None
        if tok.is_keyword("function"):
            return self._parse_function_tolerant("function")
        if tok.is_keyword("constructor", "receive", "fallback"):
            return self._parse_function_tolerant(tok.text)
        if tok.is_keyword("modifier", "event", "struct", "enum", "using", "emit",
                          "assembly", "unchecked"):
            return OpaqueMember(self._capture_opaque(stop_words=_FUNCTION_START))
        saved = self.i
        try:
            return self._parse_state_var()
        except _Backtrack:
            self.i = saved
            return OpaqueMember(self._capture_opaque(stop_words=_FUNCTION_START))

    def _parse_function_tolerant(self, kind: str):
        # malformed declarations (SolSyntaxError) propagate; only constructs
        # outside the subset fall back to verbatim capture
        saved = self.i
        try:
            return self._parse_function(kind)
        except _Backtrack:
            self.i = saved
            return OpaqueMember(self._capture_opaque(stop_words=()))

    def _parse_state_var(self) -> StateVar:
        type_text = self._parse_type_text()
        mods = []
        while self.peek().is_keyword(*_STATEVAR_MODS):
            mods.append(self.advance().text)
        name_tok = self.peek()
        if name_tok.kind != "ident" or name_tok.is_keyword(*_CONTRACT_START):
            raise _Backtrack()
        name = self.advance().text
        init = None
        if self._take("="):
            init = self._parse_expression()
        if not self._take(";"):
            raise _Backtrack()
        return StateVar(type_text=type_text, name=name, modifiers=tuple(mods), init=init)

    def _parse_type_text(self) -> str:
        tok = self.peek()
        if tok.is_keyword("mapping"):
            start = self.advance()
            if not self.at("("):
                raise _Backtrack()
            end = self._skip_balanced()
            text = self._slice(start, end)
        elif tok.kind == "ident" and (tok.text in ELEMENTARY_TYPES or not _is_reserved(tok)):
            self.advance()
            text = tok.text
            if text == "address" and self.peek().is_keyword("payable"):
                self.advance()
                text = "address payable"
        else:
            raise _Backtrack()
        while self.at("["):
            open_tok = self.advance()
            inner = []
            while not self.at("]") and self.peek().kind != "eof":
                inner.append(self.advance())
            close = self.expect("]", "array type")
            text += self.source[open_tok.pos:close.pos + 1]
        return text

    def _skip_balanced(self) -> Token:
        """Consume a balanced (...) / [...] / {...} group; returns closing token."""
        open_tok = self.advance()
        closer = _OPENERS[open_tok.text]
        depth = 1
        while depth and self.peek().kind != "eof":
            t = self.advance()
            if t.kind == "punct":
                if t.text in _OPENERS:
                    depth += 1
                elif t.text in _CLOSERS:
                    depth -= 1
                    if depth == 0:
                        return t
        raise _Backtrack()

    # -- functions --------------------------------------------------------

    def _parse_function(self, kind: str) -> FunctionDef:
        self.advance()  # keyword
        if kind == "function":
            name_tok = self.peek()
            if name_tok.kind == "punct" and name_tok.text == "(":
                # pre-0.6 unnamed fallback: "function() external payable {}"
                name, kind = "", "fallback"
            elif name_tok.kind != "ident":
                raise SolSyntaxError("malformed function declaration: missing name",
                                     name_tok.line, name_tok.col)
            else:
                name = self.advance().text
        else:
            name = kind
        if not self.at("("):
            tok = self.peek()
            raise SolSyntaxError("malformed function declaration: missing '('",
                                 tok.line, tok.col)
        params = self._parse_params()
        visibility = ""
        mutability = "none"
        extras: list[str] = []
        while not self.at("{", ";") and not self.peek().is_keyword("returns") \
                and self.peek().kind != "eof":
            tok = self.peek()
            if tok.is_keyword(*_VISIBILITY):
                visibility = self.advance().text
            elif tok.is_keyword(*_MUTABILITY):
                mutability = self.advance().text
            elif tok.kind == "ident":
                mod_tok = self.advance()
                mod_text = mod_tok.text
                if self.at("("):
                    close = self._skip_balanced()
                    mod_text += self.source[mod_tok.pos + len(mod_tok.text):close.pos + 1]
                extras.append(mod_text)
            else:
                raise _Backtrack()
        returns_text = None
        if self.peek().is_keyword("returns"):
            self.advance()
            if not self.at("("):
                raise _Backtrack()
            open_tok = self.advance()
            ret_toks = []
            depth = 1
            while depth and self.peek().kind != "eof":
                t = self.advance()
                if t.kind == "punct" and t.text in _OPENERS:
                    depth += 1
                elif t.kind == "punct" and t.text in _CLOSERS:
                    depth -= 1
                    if depth == 0:
                        break
                ret_toks.append(t)
            returns_text = join_tokens(ret_toks)
        if self._take(";"):
            body = None
        else:
            self.expect("{", "function declaration")
            body = self._parse_stmt_list()
            self.expect("}", "function declaration")
        return FunctionDef(name=name, kind=kind, params=params, visibility=visibility,
                           mutability=mutability, extra_modifiers=tuple(extras),
                           returns_text=returns_text, body=body)

    def _parse_params(self) -> tuple[Param, ...]:
        self.expect("(", "parameter list")
        params: list[Param] = []
        group: list[Token] = []
        depth = 1
        while self.peek().kind != "eof":
            tok = self.advance()
            if tok.kind == "punct" and tok.text in _OPENERS:
                depth += 1
            elif tok.kind == "punct" and tok.text in _CLOSERS:
                depth -= 1
                if depth == 0:
                    if group:
                        params.append(self._param_from_tokens(group))
                    return tuple(params)
            if tok.kind == "punct" and tok.text == "," and depth == 1:
                params.append(self._param_from_tokens(group))
                group = []
            else:
                group.append(tok)
        raise _Backtrack()

    @staticmethod
    def _param_from_tokens(group: list[Token]) -> Param:
        if not group:
            return Param(type_text="", location=None, name=None)
        toks = list(group)
        name = None
        location = None
        last = toks[-1]
        if len(toks) >= 2 and last.kind == "ident" and not _is_reserved(last):
            prev = toks[-2]
            if prev.kind == "ident" or prev.text in ("]", ")"):
                name = last.text
                toks = toks[:-1]
        if toks and toks[-1].is_keyword("memory", "storage", "calldata"):
            location = toks[-1].text
            toks = toks[:-1]
        return Param(type_text=join_tokens(toks), location=location, name=name)

    # -- statements --------------------------------------------------------

    def _parse_stmt_list(self) -> tuple:
        stmts = []
        while not self.at("}") and self.peek().kind != "eof":
            stmt = self._parse_statement()
            if stmt is not None:
                stmts.append(stmt)
        return tuple(stmts)

    def _parse_statement(self):
        tok = self.peek()
        if tok.kind == "punct" and tok.text == ";":
            self.advance()
            return None
        if tok.kind == "punct" and tok.text == "{":
            self.advance()
            body = self._parse_stmt_list()
            self.expect("}", "block")
            return BlockStmt(body=body)
        saved = self.i
        try:
            if tok.is_keyword("if"):
                return self._parse_if()
            if tok.is_keyword("for"):
                return self._parse_for()
            if tok.is_keyword("return"):
                return self._parse_return()
            return self._parse_simple_statement(require_semi=True)
        except _Backtrack:
            self.i = saved
            return OpaqueStmt(self._capture_opaque(stop_words=()))

    def _parse_branch_body(self) -> tuple:
        if self.at("{"):
            self.advance()
            body = self._parse_stmt_list()
            if not self._take("}"):
                raise _Backtrack()
            return body
        stmt = self._parse_statement()
        return (stmt,) if stmt is not None else ()

    def _parse_if(self) -> IfStmt:
        self.advance()
        if not self._take("("):
            raise _Backtrack()
        cond = self._parse_expression()
        if not self._take(")"):
            raise _Backtrack()
        then_body = self._parse_branch_body()
        else_body = None
        if self.peek().is_keyword("else"):
            self.advance()
            if self.peek().is_keyword("if"):
                else_body = (self._parse_if(),)
            else:
                else_body = self._parse_branch_body()
        return IfStmt(cond=cond, then_body=then_body, else_body=else_body)

    def _parse_for(self) -> ForStmt:
        self.advance()
        if not self._take("("):
            raise _Backtrack()
        init = None
        if not self._take(";"):
            init = self._parse_simple_statement(require_semi=True)
        cond = None
        if not self.at(";"):
            cond = self._parse_expression()
        if not self._take(";"):
            raise _Backtrack()
        post = None
        if not self.at(")"):
            post = self._parse_simple_statement(require_semi=False)
        if not self._take(")"):
            raise _Backtrack()
        body = self._parse_branch_body()
        return ForStmt(init=init, cond=cond, post=post, body=body)

    def _parse_return(self) -> ReturnStmt:
        self.advance()
        if self._take(";"):
            return ReturnStmt(value=None)
        value = self._parse_expression()
        if not self._take(";"):
            raise _Backtrack()
        return ReturnStmt(value=value)

    def _parse_simple_statement(self, require_semi: bool):
        if self._looks_like_declaration():
            type_text = self._parse_type_text()
            location = None
            if self.peek().is_keyword("memory", "storage", "calldata"):
                location = self.advance().text
            name_tok = self.peek()
            if name_tok.kind != "ident" or _is_reserved(name_tok):
                raise _Backtrack()
            name = self.advance().text
            init = None
            if self._take("="):
                init = self._parse_expression()
            if require_semi and not self._take(";"):
                raise _Backtrack()
            return VarDeclStmt(type_text=type_text, location=location, name=name, init=init)
        expr = self._parse_expression()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("=", "+=", "-=", "*=", "/=", "%="):
            op = self.advance().text
            value = self._parse_expression()
            if require_semi and not self._take(";"):
                raise _Backtrack()
            return AssignStmt(target=expr, op=op, value=value)
        if require_semi and not self._take(";"):
            raise _Backtrack()
        return ExprStmt(expr=expr)

    def _looks_like_declaration(self) -> bool:
        tok = self.peek()
        nxt = self.peek(1)
        if tok.kind != "ident":
            return False
        if tok.is_keyword("mapping"):
            return True
        if tok.text in ELEMENTARY_TYPES:
            # "string(...)" is a cast, "string x" is a declaration
            return not (nxt.kind == "punct" and nxt.text in ("(", ".", "["))
        if _is_reserved(tok):
            return False
        # user type: two idents in a row ("Manager manager")
        if nxt.kind == "ident" and not _is_reserved(nxt):
            return True
        if nxt.kind == "ident" and nxt.is_keyword("memory", "storage", "calldata"):
            return True
        return False

    # -- expressions ---------------------------------------------------------

    def _parse_expression(self, level: int = 0):
        if level >= len(_BINARY_LEVELS):
            return self._parse_unary()
        ops = _BINARY_LEVELS[level]
        left = self._parse_expression(level + 1)
        while self.peek().kind == "punct" and self.peek().text in ops:
            op = self.advance().text
            right = self._parse_expression(level + 1)
            left = Binary(op=op, left=left, right=right)
        return left

    def _parse_unary(self):
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("!", "-", "~"):
            self.advance()
            return Unary(op=tok.text, operand=self._parse_unary())
        return self._parse_postfix()

    def _parse_postfix(self):
        expr = self._parse_primary()
        while True:
            tok = self.peek()
            if tok.kind != "punct":
                return expr
            if tok.text == ".":
                self.advance()
                name_tok = self.peek()
                if name_tok.kind != "ident":
                    raise _Backtrack()
                self.advance()
                expr = Member(obj=expr, name=name_tok.text)
            elif tok.text == "(":
                self.advance()
                args = []
                if not self.at(")"):
                    args.append(self._parse_expression())
                    while self._take(","):
                        args.append(self._parse_expression())
                if not self._take(")"):
                    raise _Backtrack()
                expr = Call(callee=expr, args=tuple(args))
            elif tok.text == "[":
                self.advance()
                index = self._parse_expression()
                if not self._take("]"):
                    raise _Backtrack()
                expr = Index(obj=expr, index=index)
            else:
                return expr

    def _parse_primary(self):
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return NumberLit(value=int(tok.text.replace("_", "")), raw=tok.text)
        if tok.kind == "hexnum":
            self.advance()
            digits = tok.text[2:].replace("_", "")
            if len(digits) == 40:
                return AddressLit(raw=tok.text)
            return NumberLit(value=int(digits or "0", 16), raw=tok.text)
        if tok.kind == "string":
            self.advance()
            return StringLit(value=_unescape(tok.text), raw=tok.text)
        if tok.kind == "punct" and tok.text == "(":
            self.advance()
            inner = self._parse_expression()
            if not self._take(")"):
                raise _Backtrack()
            return inner
        if tok.kind == "ident":
            if tok.text == "true":
                self.advance()
                return BoolLit(value=True)
            if tok.text == "false":
                self.advance()
                return BoolLit(value=False)
            if tok.text == "this":
                self.advance()
                return This()
            if tok.text in ELEMENTARY_TYPES or not _is_structural_keyword(tok.text):
                self.advance()
                return Ident(name=tok.text)
        raise _Backtrack()

    # -- opaque capture --------------------------------------------------------

    def _capture_from(self, start: Token) -> str:
        """Capture from a token already consumed through the next ';'."""
        while not self.at(";") and self.peek().kind != "eof":
            if self.at("{"):
                end = self._skip_balanced()
                return self._slice(start, end)
            self.advance()
        end = self.advance() if self.at(";") else self.peek()
        return self._slice(start, end) if end.kind != "eof" else \
            self.source[start.pos:].rstrip()

    def _capture_opaque(self, stop_words: tuple) -> str:
        """Consume tokens verbatim until a statement/member boundary.

        Stops after a top-level ';' or a balanced '{...}' group, or just
        before a closing '}', EOF, or any of stop_words at top level, so a
        later declaration is never swallowed.
        """
        start = self.peek()
        last = start
        depth = 0
        first = True
        while self.peek().kind != "eof":
            tok = self.peek()
            if depth == 0 and not first:
                if tok.kind == "punct" and tok.text == "}":
                    break
                if tok.kind == "ident" and tok.text in stop_words:
                    break
            first = False
            if depth == 0 and tok.kind == "punct" and tok.text == "{":
                last = self._skip_balanced()
                if self.at(";"):
                    last = self.advance()
                break
            self.advance()
            last = tok
            if depth == 0 and tok.kind == "punct" and tok.text == ";":
                break
            if tok.kind == "punct":
                if tok.text in _OPENERS:
                    depth += 1
                elif tok.text in _CLOSERS:
                    depth -= 1
        return self._slice(start, last)


def _is_reserved(tok: Token) -> bool:
    from .lexer import KEYWORDS
    return tok.text in KEYWORDS and tok.text not in ELEMENTARY_TYPES


def _is_structural_keyword(text: str) -> bool:
    # keywords that can never start a primary expression
    return text in {
        "pragma", "import", "contract", "interface", "library", "abstract",
        "function", "constructor", "modifier", "event", "struct", "enum",
        "using", "is", "if", "else", "for", "while", "do", "return", "returns",
        "break", "continue", "mapping", "memory", "storage", "calldata",
        "public", "private", "internal", "external", "constant", "immutable",
        "virtual", "override", "indexed", "anonymous", "emit", "delete",
        "unchecked", "assembly",
    }
