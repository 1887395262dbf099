"""Shared lexer for the hand-rolled grammar backends.

Produces a flat token stream: identifiers/keywords, numbers, strings, and
punctuation (longest-match against a per-language operator table).  Comments
and whitespace are discarded.  The lexer never fails; malformed input (say an
unterminated string) just ends the token at end of line or input.
"""

from __future__ import annotations

from dataclasses import dataclass, field

IDENT = "ident"
NUMBER = "number"
STRING = "string"
PUNCT = "punct"

_NUMBER_SUFFIXES = set("fFlLdDuUmM")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int

    def __repr__(self):  # compact, for parser debugging
        return f"{self.kind}({self.text!r})@{self.line}"


@dataclass(frozen=True)
class LexRules:
    line_comments: tuple[str, ...] = ("//",)
    block_comments: tuple[tuple[str, str], ...] = (("/*", "*/"),)
    string_quotes: str = "\"'"
    ident_extra: str = "_$"
    # multi-char operators, matched longest-first
    operators: tuple[str, ...] = ()
    # SQL-style: '' inside a '-quoted string is a literal quote
    doubled_quote_escape: bool = False


C_OPERATORS = (
    ">>>=", "===", "!==", ">>>", "<<=", ">>=", "**=", "?.",
    "=>", "->", "++", "--", "&&", "||", "==", "!=", "<=", ">=",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>",
    "**", "..", "::", "?:", "!!",
)

SQL_OPERATORS = ("<>", "<=", ">=", "!=", "||")

RUBY_OPERATORS = (
    "<=>", "**", "==", "!=", "<=", ">=", "&&", "||", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "||=", "&&=", "=~", "...", "..", "::", "->",
)


def lex(source: str, rules: LexRules) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    line = 1
    ops = sorted(rules.operators, key=len, reverse=True)

    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue

        matched_comment = False
        for prefix in rules.line_comments:
            if source.startswith(prefix, i):
                end = source.find("\n", i)
                i = n if end < 0 else end
                matched_comment = True
                break
        if matched_comment:
            continue
        for opener, closer in rules.block_comments:
            if source.startswith(opener, i):
                end = source.find(closer, i + len(opener))
                if end < 0:
                    line += source.count("\n", i)
                    i = n
                else:
                    line += source.count("\n", i, end)
                    i = end + len(closer)
                matched_comment = True
                break
        if matched_comment:
            continue

        if ch in rules.string_quotes:
            start = i
            i += 1
            while i < n:
                c = source[i]
                if c == "\\" and not rules.doubled_quote_escape and i + 1 < n:
                    i += 2
                    continue
                if c == ch:
                    if rules.doubled_quote_escape and source.startswith(ch * 2, i):
                        i += 2
                        continue
                    i += 1
                    break
                if c == "\n" and not rules.doubled_quote_escape:
                    break  # unterminated: stop at end of line
                i += 1
            tokens.append(Token(STRING, source[start:i], line))
            line += source.count("\n", start, i)
            continue

        if ch.isdigit():
            start = i
            if source.startswith(("0x", "0X"), i):
                i += 2
                while i < n and (source[i].isalnum()):
                    i += 1
            else:
                while i < n and source[i].isdigit():
                    i += 1
                # one decimal point, but not a range operator like 1..10
                if i + 1 < n and source[i] == "." and source[i + 1].isdigit():
                    i += 1
                    while i < n and source[i].isdigit():
                        i += 1
                if i < n and source[i] in "eE":
                    j = i + 1
                    if j < n and source[j] in "+-":
                        j += 1
                    if j < n and source[j].isdigit():
                        i = j
                        while i < n and source[i].isdigit():
                            i += 1
                if i < n and source[i] in _NUMBER_SUFFIXES:
                    i += 1
            tokens.append(Token(NUMBER, source[start:i], line))
            continue

        if ch.isalpha() or ch in rules.ident_extra:
            start = i
            while i < n and (source[i].isalnum() or source[i] in rules.ident_extra):
                i += 1
            tokens.append(Token(IDENT, source[start:i], line))
            continue

        op_hit = None
        for op in ops:
            if source.startswith(op, i):
                op_hit = op
                break
        if op_hit:
            tokens.append(Token(PUNCT, op_hit, line))
            i += len(op_hit)
        else:
            tokens.append(Token(PUNCT, ch, line))
            i += 1

    return tokens
