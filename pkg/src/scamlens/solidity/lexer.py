"""Tokenizer for the Solidity subset."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SolSyntaxError

MULTI_CHAR_OPS = (
    "**", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "++", "--", "=>", "->",
)
SINGLE_CHAR_OPS = set("+-*/%<>=!&|^~?:;,.(){}[]")

KEYWORDS = frozenset({
    "pragma", "solidity", "import", "contract", "interface", "library", "abstract",
    "function", "constructor", "receive", "fallback", "modifier", "event", "emit",
    "struct", "enum", "mapping", "using", "is", "new", "delete",
    "public", "private", "internal", "external", "pure", "view", "payable",
    "constant", "immutable", "virtual", "override", "memory", "storage", "calldata",
    "if", "else", "for", "while", "do", "return", "returns", "break", "continue",
    "require", "assert", "revert", "this", "msg", "tx", "block", "abi",
    "true", "false", "indexed", "anonymous", "unchecked", "assembly",
})

ELEMENTARY_TYPES = frozenset(
    {"address", "bool", "string", "bytes", "byte", "int", "uint", "var"}
    | {f"uint{n}" for n in range(8, 257, 8)}
    | {f"int{n}" for n in range(8, 257, 8)}
    | {f"bytes{n}" for n in range(1, 33)}
)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "hexnum" | "string" | "punct" | "eof"
    text: str
    line: int
    col: int
    pos: int

    def is_keyword(self, *words: str) -> bool:
        return self.kind == "ident" and self.text in words


def tokenize(source: str) -> list[Token]:
    """Lex source into tokens, skipping comments and whitespace.

    Raises SolSyntaxError on unterminated strings or block comments.
    """
    tokens: list[Token] = []
    i = 0
    line = 1
    line_start = 0
    n = len(source)

    def col(pos: int) -> int:
        return pos - line_start + 1

    while i < n:
        c = source[i]
        if c == "\n":
            line += 1
            i += 1
            line_start = i
            continue
        if c in " \t\r\f\v":
            i += 1
            continue
        if source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j == -1 else j
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j == -1:
                raise SolSyntaxError("unterminated block comment", line, col(i))
            line += source.count("\n", i, j)
            if "\n" in source[i:j]:
                line_start = i + source.rindex("\n", i, j) + 1
            i = j + 2
            continue
        if c in "\"'":
            quote = c
            j = i + 1
            while j < n:
                if source[j] == "\\":
                    j += 2
                    continue
                if source[j] == quote:
                    break
                if source[j] == "\n":
                    raise SolSyntaxError("unterminated string literal", line, col(i))
                j += 1
            if j >= n:
                raise SolSyntaxError("unterminated string literal", line, col(i))
            tokens.append(Token("string", source[i:j + 1], line, col(i), i))
            i = j + 1
            continue
        if c.isdigit():
            if source.startswith(("0x", "0X"), i):
                j = i + 2
                while j < n and (source[j] in "0123456789abcdefABCDEF" or source[j] == "_"):
                    j += 1
                tokens.append(Token("hexnum", source[i:j], line, col(i), i))
            else:
                j = i
                while j < n and (source[j].isdigit() or source[j] == "_"):
                    j += 1
                tokens.append(Token("number", source[i:j], line, col(i), i))
            i = j
            continue
        if c.isalpha() or c == "_" or c == "$":
            j = i
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            tokens.append(Token("ident", source[i:j], line, col(i), i))
            i = j
            continue
        two = source[i:i + 2]
        if two in MULTI_CHAR_OPS:
            tokens.append(Token("punct", two, line, col(i), i))
            i += 2
            continue
        if c in SINGLE_CHAR_OPS:
            tokens.append(Token("punct", c, line, col(i), i))
            i += 1
            continue
        raise SolSyntaxError(f"unexpected character {c!r}", line, col(i))

    tokens.append(Token("eof", "", line, col(i), i))
    return tokens
