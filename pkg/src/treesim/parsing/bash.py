"""Bash backend: commands, pipelines, and the common control structures.

Shell syntax is word-oriented, so this engine does its own lexing: words,
strings, expansions ($x, ${x}, $(...)), assignments, and the handful of
control keywords (if/then/fi, for/do/done, while, case/esac, functions).
Everything unrecognized degrades to ERROR nodes or plain words, never an
exception.
"""

from __future__ import annotations

import re

from ..tree import SyntaxTree, TreeNode

ERROR_KIND = "ERROR"

_WORD_RE = re.compile(r"[^\s|&;<>()={}\[\]\"'#$]+")

_SPECIALS = ("&&", "||", ";;", "<<", ">>", "$((", "$(", "${", "((", "))")


def _lex(source: str):
    tokens = []  # (kind, text, line)
    i = 0
    n = len(source)
    line = 1
    while i < n:
        ch = source[i]
        if ch == "\n":
            tokens.append(("newline", "\n", line))
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == "#":
            end = source.find("\n", i)
            i = n if end < 0 else end
            continue
        if ch in "\"'":
            start = i
            i += 1
            while i < n and source[i] != ch:
                if source[i] == "\\" and ch == '"':
                    i += 1
                i += 1
            i = min(i + 1, n)
            tokens.append(("string", source[start:i], line))
            line += source.count("\n", start, i)
            continue
        hit = None
        for special in _SPECIALS:
            if source.startswith(special, i):
                hit = special
                break
        if hit:
            tokens.append(("punct", hit, line))
            i += len(hit)
            continue
        if ch == "$":
            match = re.match(r"\$[A-Za-z_][A-Za-z0-9_]*|\$[0-9@#?*]", source[i:])
            if match:
                tokens.append(("expansion", match.group(), line))
                i += match.end()
                continue
            tokens.append(("punct", "$", line))
            i += 1
            continue
        match = _WORD_RE.match(source, i)
        if match:
            tokens.append(("word", match.group(), line))
            i = match.end()
            continue
        tokens.append(("punct", ch, line))
        i += 1
    return tokens


_KEYWORDS = {
    "if", "then", "elif", "else", "fi", "for", "do", "done", "while",
    "until", "case", "esac", "in", "function", "return", "break", "continue",
}


class _BashParser:
    def __init__(self, tokens, leaf_text: bool):
        self.tokens = tokens
        self.leaf_text = leaf_text
        self.pos = 0
        self.errors = 0

    def peek(self, ahead=0):
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, text):
        tok = self.peek()
        return tok is not None and tok[1] == text

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, text):
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text):
        if self.accept(text):
            return True
        self.errors += 1
        return False

    def leaf(self, kind, text=None):
        if self.leaf_text and text is not None:
            return TreeNode(f"{kind}:{text}", [])
        return TreeNode(kind, [])

    def skip_separators(self):
        while self.peek() is not None and self.peek()[1] in ("\n", ";", "&"):
            self.advance()

    def parse_program(self):
        return TreeNode("program", self.parse_statements(frozenset()))

    def parse_statements(self, stop):
        out = []
        self.skip_separators()
        while self.peek() is not None and self.peek()[1] not in stop:
            before = self.pos
            out.append(self.parse_statement())
            if self.pos == before:
                self.errors += 1
                out.append(self.leaf(ERROR_KIND, self.advance()[1]))
            self.skip_separators()
        return out

    def parse_statement(self):
        tok = self.peek()
        text = tok[1]
        if text == "if":
            return self.parse_if()
        if text == "for":
            return self.parse_for()
        if text in ("while", "until"):
            return self.parse_while()
        if text == "case":
            return self.parse_case()
        if text == "function":
            self.advance()
            name = self.leaf("identifier", self.advance()[1]) if self.peek() else self.leaf(ERROR_KIND)
            self.accept("(")
            self.accept(")")
            return self.parse_function_body(name)
        if text in ("return", "break", "continue"):
            self.advance()
            children = []
            if self.peek() is not None and self.peek()[0] in ("word", "expansion"):
                children.append(self.parse_word())
            kind = {"return": "return_statement", "break": "break_statement", "continue": "continue_statement"}[text]
            return TreeNode(kind, children)
        # function definition: name () { ... }
        if (
            tok[0] == "word"
            and self.peek(1) is not None
            and self.peek(1)[1] == "("
            and self.peek(2) is not None
            and self.peek(2)[1] == ")"
        ):
            name = self.leaf("identifier", self.advance()[1])
            self.advance()
            self.advance()
            return self.parse_function_body(name)
        # assignment: name=value (lexed as word '=' value)
        if tok[0] == "word" and self.peek(1) is not None and self.peek(1)[1] == "=":
            name = self.leaf("identifier", self.advance()[1])
            self.advance()
            value = self.parse_word() if self.peek() is not None and self.peek()[1] not in ("\n", ";") else self.leaf("word", "")
            return TreeNode("variable_assignment", [name, value])
        if text == "((":
            return self.parse_arithmetic()
        return self.parse_pipeline()

    def parse_function_body(self, name):
        self.skip_separators()
        children = [name]
        if self.accept("{"):
            children.append(TreeNode("block", self.parse_statements(frozenset({"}"}))))
            self.expect("}")
        return TreeNode("function_declaration", children)

    def parse_if(self):
        self.advance()  # if/elif
        children = [TreeNode("condition", self.parse_statements(frozenset({"then"})))]
        self.expect("then")
        children.append(TreeNode("block", self.parse_statements(frozenset({"elif", "else", "fi"}))))
        if self.at("elif"):
            children.append(self.parse_if())  # nested chain; no trailing fi
            return TreeNode("if_statement", children)
        if self.accept("else"):
            children.append(TreeNode("block", self.parse_statements(frozenset({"fi"}))))
        self.expect("fi")
        return TreeNode("if_statement", children)

    def parse_for(self):
        self.advance()
        children = []
        if self.peek() is not None and self.peek()[0] == "word":
            children.append(self.leaf("identifier", self.advance()[1]))
        if self.accept("in"):
            items = []
            while self.peek() is not None and self.peek()[1] not in ("\n", ";", "do"):
                items.append(self.parse_word())
            children.append(TreeNode("word_list", items))
        self.skip_separators()
        self.expect("do")
        children.append(TreeNode("block", self.parse_statements(frozenset({"done"}))))
        self.expect("done")
        return TreeNode("for_statement", children)

    def parse_while(self):
        self.advance()
        children = [TreeNode("condition", self.parse_statements(frozenset({"do"})))]
        self.expect("do")
        children.append(TreeNode("block", self.parse_statements(frozenset({"done"}))))
        self.expect("done")
        return TreeNode("while_statement", children)

    def parse_case(self):
        self.advance()
        children = []
        if self.peek() is not None:
            children.append(self.parse_word())
        self.expect("in")
        self.skip_separators()
        while self.peek() is not None and not self.at("esac"):
            patterns = []
            while self.peek() is not None and self.peek()[1] not in (")", "esac"):
                if self.peek()[1] == "|":
                    self.advance()
                    continue
                patterns.append(self.parse_word())
            self.accept(")")
            body = self.parse_statements(frozenset({";;", "esac"}))
            self.accept(";;")
            self.skip_separators()
            children.append(TreeNode("switch_case", patterns + [TreeNode("block", body)]))
        self.expect("esac")
        return TreeNode("switch_statement", children)

    def parse_arithmetic(self):
        self.advance()  # ((
        parts = []
        while self.peek() is not None and not self.at("))"):
            parts.append(self.parse_word())
        self.expect("))")
        return TreeNode("arithmetic_expansion", parts)

    def parse_pipeline(self):
        first = self.parse_command()
        if not self.at("|"):
            return first
        parts = [first]
        while self.accept("|"):
            parts.append(self.parse_command())
        return TreeNode("pipeline", parts)

    _COMMAND_END = {"\n", ";", "&", "|", "&&", "||", ")", "}", ";;", "then", "do", "done", "fi", "elif", "else", "esac"}

    def parse_command(self):
        children = []
        name_taken = False
        while self.peek() is not None and self.peek()[1] not in self._COMMAND_END:
            kind, text, _ = self.peek()
            if text in ("<", ">", ">>", "<<"):
                self.advance()
                target = self.parse_word() if self.peek() is not None and self.peek()[1] not in self._COMMAND_END else self.leaf(ERROR_KIND)
                children.append(TreeNode("redirect", [target]))
                continue
            word = self.parse_word()
            if not name_taken:
                word = TreeNode("command_name", [word])
                name_taken = True
            children.append(word)
        if not children:
            self.errors += 1
            if self.peek() is not None:
                children.append(self.leaf(ERROR_KIND, self.advance()[1]))
        node = TreeNode("command", children)
        if self.accept("&&") or self.accept("||"):
            self.skip_separators()
            return TreeNode("list", [node, self.parse_statement()])
        return node

    def parse_word(self):
        tok = self.peek()
        if tok is None:
            self.errors += 1
            return self.leaf(ERROR_KIND)
        kind, text, _ = tok
        if text == "$(":
            self.advance()
            inner = self.parse_statements(frozenset({")"}))
            self.expect(")")
            return TreeNode("command_substitution", inner)
        if text == "$((":
            self.advance()
            parts = []
            while self.peek() is not None and not self.at("))"):
                parts.append(self.parse_word())
            self.expect("))")
            return TreeNode("arithmetic_expansion", parts)
        if text == "${":
            self.advance()
            name = None
            if self.peek() is not None and self.peek()[0] == "word":
                name = self.advance()[1]
            self.expect("}")
            return self.leaf("expansion", name)
        self.advance()
        if kind == "expansion":
            return self.leaf("expansion", text)
        if kind == "string":
            return self.leaf("string_literal", text)
        if kind == "word":
            if text.isdigit():
                return self.leaf("number_literal", text)
            return self.leaf("word", text)
        return self.leaf("word", text)


def parse(source: str, include_leaf_text: bool = False) -> SyntaxTree:
    parser = _BashParser(_lex(source), include_leaf_text)
    root = parser.parse_program()
    return SyntaxTree(root=root, had_parse_errors=parser.errors > 0)
