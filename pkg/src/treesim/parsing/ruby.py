"""Ruby backend: end-delimited blocks over the shared expression grammar.

Statement structure (def/if/while/case/class ... end) is parsed here; the
expression level (binary operators, calls, member access, literals) is
inherited from the C-family engine.  Paren-less command calls like
`puts x, y` are recognized when the arguments start on the same line.
"""

from __future__ import annotations

from ..tree import SyntaxTree, TreeNode
from .cfamily import Dialect, _Parser
from .tokens import IDENT, NUMBER, RUBY_OPERATORS, STRING, LexRules, lex

ERROR_KIND = "ERROR"

_RUBY_KEYWORDS = {
    "def", "end", "if", "elsif", "else", "unless", "while", "until", "case",
    "when", "then", "do", "class", "module", "return", "break", "next",
    "begin", "rescue", "ensure", "yield", "and", "or", "not", "in",
}

_LEX_RULES = LexRules(
    line_comments=("#",),
    block_comments=(),
    string_quotes="\"'",
    ident_extra="_@$?!",
    operators=RUBY_OPERATORS,
)

_DIALECT = Dialect("ruby")


class _RubyParser(_Parser):
    def parse_program(self) -> TreeNode:
        children = self.parse_statements(stop=frozenset())
        return TreeNode("program", children)

    def parse_statements(self, stop: frozenset[str]) -> list[TreeNode]:
        out: list[TreeNode] = []
        while self.peek() is not None and self.peek().text not in stop:
            before = self.pos
            out.append(self.parse_statement())
            if self.pos == before:
                out.append(self.error_node())
        return out

    def parse_statement(self) -> TreeNode:
        tok = self.peek()
        assert tok is not None
        text = tok.text

        if text == "def":
            return self.parse_def()
        if text in ("if", "unless"):
            return self.parse_if_chain()
        if text in ("while", "until"):
            return self.parse_while_until()
        if text == "case":
            return self.parse_case()
        if text in ("class", "module"):
            return self.parse_class_module()
        if text == "return":
            self.advance()
            children = []
            if self.peek() is not None and self._same_line() and self.peek().text not in _RUBY_KEYWORDS:
                children.append(self.parse_expression())
            return TreeNode("return_statement", children)
        if text == "break":
            self.advance()
            return TreeNode("break_statement", [])
        if text == "next":
            self.advance()
            return TreeNode("continue_statement", [])
        if text == "begin":
            self.advance()
            body = self.parse_statements(frozenset({"rescue", "ensure", "end"}))
            children = [TreeNode("block", body)]
            while self.at("rescue"):
                self.advance()
                while self.peek() is not None and self._same_line() and not self.at("then"):
                    self.advance()  # exception classes / binders
                self.accept("then")
                children.append(
                    TreeNode("catch_clause", self.parse_statements(frozenset({"rescue", "ensure", "end"})))
                )
            if self.accept("ensure"):
                children.append(TreeNode("finally_clause", self.parse_statements(frozenset({"end"}))))
            self.expect("end")
            return TreeNode("try_statement", children)
        if text == "end":
            return self.error_node()  # unmatched terminator

        return self.parse_expression_statement()

    def _same_line(self) -> bool:
        if self.pos == 0 or self.peek() is None:
            return True
        return self.tokens[self.pos - 1].line == self.peek().line

    def parse_def(self) -> TreeNode:
        self.advance()
        children: list[TreeNode] = []
        if self.peek() is not None and self.peek().kind == IDENT:
            name = self.advance().text
            # singleton methods: def self.name
            if self.accept("."):
                if self.peek() is not None and self.peek().kind == IDENT:
                    name = self.advance().text
            children.append(self.leaf("identifier", name))
        params = []
        if self.accept("("):
            while self.peek() is not None and not self.at(")"):
                if self.peek().kind == IDENT:
                    part = [self.leaf("identifier", self.advance().text)]
                    if self.accept("="):
                        part.append(self.parse_expression())
                    params.append(TreeNode("parameter", part))
                else:
                    params.append(self.error_node())
                if not self.accept(","):
                    break
            self.expect(")")
        else:
            while self.peek() is not None and self._same_line() and self.peek().kind == IDENT:
                params.append(TreeNode("parameter", [self.leaf("identifier", self.advance().text)]))
                if not self.accept(","):
                    break
        children.append(TreeNode("parameter_list", params))
        children.append(TreeNode("block", self.parse_statements(frozenset({"end"}))))
        self.expect("end")
        return TreeNode("function_declaration", children)

    def parse_if_chain(self) -> TreeNode:
        self.advance()  # if/unless
        children = [self.parse_expression()]
        self.accept("then")
        children.append(
            TreeNode("block", self.parse_statements(frozenset({"elsif", "else", "end"})))
        )
        if self.at("elsif"):
            # an elsif chain nests as the else branch
            children.append(self.parse_if_chain_tail())
            return TreeNode("if_statement", children)
        if self.accept("else"):
            children.append(TreeNode("block", self.parse_statements(frozenset({"end"}))))
        self.expect("end")
        return TreeNode("if_statement", children)

    def parse_if_chain_tail(self) -> TreeNode:
        self.advance()  # elsif
        children = [self.parse_expression()]
        self.accept("then")
        children.append(
            TreeNode("block", self.parse_statements(frozenset({"elsif", "else", "end"})))
        )
        if self.at("elsif"):
            children.append(self.parse_if_chain_tail())
            return TreeNode("if_statement", children)
        if self.accept("else"):
            children.append(TreeNode("block", self.parse_statements(frozenset({"end"}))))
        self.expect("end")
        return TreeNode("if_statement", children)

    def parse_while_until(self) -> TreeNode:
        self.advance()
        children = [self.parse_expression()]
        self.accept("do")
        children.append(TreeNode("block", self.parse_statements(frozenset({"end"}))))
        self.expect("end")
        return TreeNode("while_statement", children)

    def parse_case(self) -> TreeNode:
        self.advance()
        children = []
        if not self.at("when"):
            children.append(self.parse_expression())
        while self.at("when"):
            self.advance()
            clause = [self.parse_expression()]
            while self.accept(","):
                clause.append(self.parse_expression())
            self.accept("then")
            clause.append(
                TreeNode("block", self.parse_statements(frozenset({"when", "else", "end"})))
            )
            children.append(TreeNode("switch_case", clause))
        if self.accept("else"):
            children.append(
                TreeNode("switch_case", [TreeNode("block", self.parse_statements(frozenset({"end"})))])
            )
        self.expect("end")
        return TreeNode("switch_statement", children)

    def parse_class_module(self) -> TreeNode:
        self.advance()
        children = []
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        if self.accept("<"):  # superclass
            if self.peek() is not None and self.peek().kind == IDENT:
                self.advance()
        children.append(TreeNode("class_body", self.parse_statements(frozenset({"end"}))))
        self.expect("end")
        return TreeNode("class_declaration", children)

    def parse_expression_statement(self) -> TreeNode:
        expr = self.parse_expression()
        # command call: `puts x, y` — bare callee followed, same line, by an
        # argument-looking token
        if expr.label.startswith("identifier") or expr.label == "member_expression":
            tok = self.peek()
            if (
                tok is not None
                and self._same_line()
                and tok.text not in _RUBY_KEYWORDS
                and (tok.kind in (IDENT, NUMBER, STRING) or tok.text in ("[", ":", "-", "("))
            ):
                args = [self.parse_expression()]
                while self.accept(","):
                    args.append(self.parse_expression())
                expr = TreeNode("call_expression", [expr, TreeNode("argument_list", args)])
        if self.at("do"):
            self.advance()
            params = []
            if self.accept("|"):
                while self.peek() is not None and not self.at("|"):
                    if self.peek().kind == IDENT:
                        params.append(TreeNode("parameter", [self.leaf("identifier", self.advance().text)]))
                    else:
                        self.advance()
                    self.accept(",")
                self.expect("|")
            body = self.parse_statements(frozenset({"end"}))
            self.expect("end")
            expr = TreeNode(
                "call_expression" if expr.label != "call_expression" else expr.label,
                list(expr.children) if expr.label == "call_expression" else [expr],
            )
            expr.children.append(TreeNode("lambda_expression", params + body))
        # postfix conditional: `expr if cond` / `expr unless cond`
        if self.at("if") or self.at("unless"):
            if self._same_line():
                self.advance()
                cond = self.parse_expression()
                return TreeNode("if_statement", [cond, TreeNode("expression_statement", [expr])])
        return TreeNode("expression_statement", [expr])

    # symbols: `:name`
    def parse_primary(self) -> TreeNode:
        tok = self.peek()
        if tok is not None and tok.text == ":":
            nxt = self.peek(1)
            if nxt is not None and nxt.kind == IDENT:
                self.advance()
                return self.leaf("symbol_literal", self.advance().text)
        if tok is not None and tok.text in ("if", "unless", "case"):
            # expression-position conditional: `x = if a then b else c end`
            return self.parse_if_chain() if tok.text != "case" else self.parse_case()
        return super().parse_primary()


def parse(source: str, include_leaf_text: bool = False) -> SyntaxTree:
    tokens = lex(source, _LEX_RULES)
    parser = _RubyParser(tokens, _DIALECT, include_leaf_text)
    root = parser.parse_program()
    return SyntaxTree(root=root, had_parse_errors=parser.errors > 0)
