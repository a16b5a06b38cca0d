"""Tokenizer for the supported Solidity subset."""

import re
from dataclasses import dataclass

KEYWORDS = {
    "pragma", "solidity", "contract", "interface", "is", "function",
    "modifier", "constructor", "returns", "return", "if", "else", "while",
    "require", "assert", "mapping", "public", "private", "internal",
    "external", "view", "pure", "payable", "memory", "calldata", "storage",
    "true", "false", "uint", "uint256", "address", "bool", "bytes",
    "string", "msg", "this", "emit", "event", "immutable", "constant",
}

_TOKEN_RE = re.compile(r"""
    (?P<comment>//[^\n]*|/\*.*?\*/)
  | (?P<number>0x[0-9a-fA-F]+|\d+)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<string>\"(?:[^\"\\]|\\.)*\")
  | (?P<punct>=>|\+=|-=|\*=|/=|==|!=|<=|>=|&&|\|\||[{}()\[\];,.!<>=+\-*/%:&|^])
  | (?P<ws>\s+)
""", re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str   # "number" | "ident" | "keyword" | "string" | "punct" | "eof"
    text: str
    offset: int


class LexError(Exception):
    pass


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise LexError(f"unexpected character {source[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind in ("ws", "comment"):
            continue
        text = m.group()
        if kind == "ident" and text in KEYWORDS:
            kind = "keyword"
        tokens.append(Token(kind, text, m.start()))
    tokens.append(Token("eof", "", len(source)))
    return tokens
