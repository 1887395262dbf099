"""SQL backend: clause-structured statements with a small expression grammar.

Keywords are case-insensitive; node kinds follow the clause structure
(select_statement, from_clause, where_clause, ...).  Statements are split on
semicolons; anything unrecognized becomes ERROR nodes.
"""

from __future__ import annotations

from ..tree import SyntaxTree, TreeNode
from .tokens import IDENT, NUMBER, PUNCT, SQL_OPERATORS, STRING, LexRules, Token, lex

ERROR_KIND = "ERROR"

_LEX_RULES = LexRules(
    line_comments=("--",),
    block_comments=(("/*", "*/"),),
    string_quotes="'\"",
    ident_extra="_",
    operators=SQL_OPERATORS,
    doubled_quote_escape=True,
)

_BINARY_PRECEDENCE = {
    "or": 1,
    "and": 2,
    "=": 4, "<>": 4, "!=": 4, "<": 4, ">": 4, "<=": 4, ">=": 4,
    "like": 4, "in": 4, "is": 4, "between": 4,
    "||": 5,
    "+": 6, "-": 6,
    "*": 7, "/": 7, "%": 7,
}

_CLAUSE_STARTERS = {
    "from", "where", "group", "having", "order", "limit", "join", "inner",
    "left", "right", "full", "outer", "cross", "on", "union", "values", "set",
}


class _SqlParser:
    def __init__(self, tokens: list[Token], leaf_text: bool):
        self.tokens = tokens
        self.leaf_text = leaf_text
        self.pos = 0
        self.errors = 0

    def peek(self, ahead: int = 0) -> Token | None:
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def kw(self, ahead: int = 0) -> str:
        tok = self.peek(ahead)
        return tok.text.lower() if tok is not None and tok.kind == IDENT else ""

    def at(self, text: str) -> bool:
        tok = self.peek()
        if tok is None:
            return False
        return tok.text.lower() == text if tok.kind == IDENT else tok.text == text

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> bool:
        if self.accept(text):
            return True
        self.errors += 1
        return False

    def leaf(self, kind: str, text: str | None = None) -> TreeNode:
        if self.leaf_text and text is not None:
            return TreeNode(f"{kind}:{text}", [])
        return TreeNode(kind, [])

    def parse_program(self) -> TreeNode:
        statements = []
        while self.peek() is not None:
            while self.accept(";"):
                pass
            if self.peek() is None:
                break
            before = self.pos
            statements.append(self.parse_statement())
            if self.pos == before:
                self.errors += 1
                statements.append(self.leaf(ERROR_KIND, self.advance().text))
            while self.peek() is not None and not self.accept(";"):
                # trailing tokens the statement parser did not consume
                self.errors += 1
                statements.append(self.leaf(ERROR_KIND, self.advance().text))
        return TreeNode("program", statements)

    def parse_statement(self) -> TreeNode:
        head = self.kw()
        if head == "select":
            return self.parse_select()
        if head == "insert":
            return self.parse_insert()
        if head == "update":
            return self.parse_update()
        if head == "delete":
            return self.parse_delete()
        if head == "create":
            return self.parse_create()
        self.errors += 1
        return self.leaf(ERROR_KIND, self.advance().text)

    # --- SELECT ---------------------------------------------------------
    def parse_select(self) -> TreeNode:
        self.advance()
        children = []
        self.accept("distinct")
        items = []
        while self.peek() is not None and self.kw() not in _CLAUSE_STARTERS and not self.at(";"):
            if self.at("*"):
                self.advance()
                items.append(TreeNode("all_columns", []))
            else:
                items.append(self.parse_select_item())
            if not self.accept(","):
                break
        children.append(TreeNode("select_clause", items))
        if self.accept("from"):
            tables = [self.parse_table_ref()]
            while self.accept(","):
                tables.append(self.parse_table_ref())
            children.append(TreeNode("from_clause", tables))
        while self.kw() in ("join", "inner", "left", "right", "full", "outer", "cross"):
            while self.kw() in ("inner", "left", "right", "full", "outer", "cross"):
                self.advance()
            self.expect("join")
            clause = [self.parse_table_ref()]
            if self.accept("on"):
                clause.append(self.parse_expression())
            children.append(TreeNode("join_clause", clause))
        if self.accept("where"):
            children.append(TreeNode("where_clause", [self.parse_expression()]))
        if self.accept("group"):
            self.expect("by")
            cols = [self.parse_expression()]
            while self.accept(","):
                cols.append(self.parse_expression())
            children.append(TreeNode("group_by_clause", cols))
        if self.accept("having"):
            children.append(TreeNode("having_clause", [self.parse_expression()]))
        if self.accept("order"):
            self.expect("by")
            items = [self.parse_order_item()]
            while self.accept(","):
                items.append(self.parse_order_item())
            children.append(TreeNode("order_by_clause", items))
        if self.accept("limit"):
            children.append(TreeNode("limit_clause", [self.parse_expression()]))
        return TreeNode("select_statement", children)

    def parse_select_item(self) -> TreeNode:
        expr = self.parse_expression()
        if self.accept("as"):
            if self.peek() is not None and self.peek().kind == IDENT:
                alias = self.leaf("identifier", self.advance().text)
                return TreeNode("alias", [expr, alias])
        return expr

    def parse_table_ref(self) -> TreeNode:
        if self.peek() is not None and self.peek().kind == IDENT and self.kw() not in _CLAUSE_STARTERS:
            name = self.leaf("identifier", self.advance().text)
            if self.kw() not in _CLAUSE_STARTERS and self.peek() is not None and self.peek().kind == IDENT and self.kw() != "as":
                alias = self.leaf("identifier", self.advance().text)
                return TreeNode("alias", [name, alias])
            if self.accept("as") and self.peek() is not None and self.peek().kind == IDENT:
                alias = self.leaf("identifier", self.advance().text)
                return TreeNode("alias", [name, alias])
            return name
        self.errors += 1
        return self.leaf(ERROR_KIND, self.advance().text if self.peek() is not None else None)

    def parse_order_item(self) -> TreeNode:
        expr = self.parse_expression()
        if self.at("asc") or self.at("desc"):
            self.advance()
        return TreeNode("order_item", [expr])

    # --- INSERT / UPDATE / DELETE / CREATE ------------------------------
    def parse_insert(self) -> TreeNode:
        self.advance()
        self.expect("into")
        children = []
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        if self.accept("("):
            cols = []
            while self.peek() is not None and not self.at(")"):
                if self.peek().kind == IDENT:
                    cols.append(self.leaf("identifier", self.advance().text))
                else:
                    cols.append(self.leaf(ERROR_KIND, self.advance().text))
                self.accept(",")
            self.expect(")")
            children.append(TreeNode("column_list", cols))
        if self.accept("values"):
            rows = []
            while self.accept("("):
                values = []
                while self.peek() is not None and not self.at(")"):
                    values.append(self.parse_expression())
                    self.accept(",")
                self.expect(")")
                rows.append(TreeNode("value_tuple", values))
                if not self.accept(","):
                    break
            children.append(TreeNode("values_clause", rows))
        elif self.at("select"):
            children.append(self.parse_select())
        return TreeNode("insert_statement", children)

    def parse_update(self) -> TreeNode:
        self.advance()
        children = []
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        if self.accept("set"):
            sets = []
            while True:
                left = self.parse_primary()
                self.expect("=")
                right = self.parse_expression()
                sets.append(TreeNode("assignment", [left, right]))
                if not self.accept(","):
                    break
            children.append(TreeNode("set_clause", sets))
        if self.accept("where"):
            children.append(TreeNode("where_clause", [self.parse_expression()]))
        return TreeNode("update_statement", children)

    def parse_delete(self) -> TreeNode:
        self.advance()
        self.expect("from")
        children = []
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        if self.accept("where"):
            children.append(TreeNode("where_clause", [self.parse_expression()]))
        return TreeNode("delete_statement", children)

    def parse_create(self) -> TreeNode:
        self.advance()
        if not self.accept("table"):
            self.errors += 1
            return self.leaf(ERROR_KIND, "create")
        children = []
        if self.accept("if"):
            self.accept("not")
            self.accept("exists")
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        if self.accept("("):
            while self.peek() is not None and not self.at(")"):
                col = []
                if self.peek().kind == IDENT:
                    col.append(self.leaf("identifier", self.advance().text))
                type_parts = []
                while self.peek() is not None and self.peek().text not in (",", ")"):
                    type_parts.append(self.advance().text)
                if type_parts:
                    col.append(self.leaf("type", " ".join(type_parts)))
                children.append(TreeNode("column_definition", col or [self.leaf(ERROR_KIND)]))
                self.accept(",")
            self.expect(")")
        return TreeNode("create_table_statement", children)

    # --- expressions ----------------------------------------------------
    def parse_expression(self) -> TreeNode:
        return self.parse_binary(1)

    def parse_binary(self, min_prec: int) -> TreeNode:
        left = self.parse_unary()
        while True:
            tok = self.peek()
            if tok is None:
                return left
            text = tok.text.lower() if tok.kind == IDENT else tok.text
            prec = _BINARY_PRECEDENCE.get(text)
            if prec is None or prec < min_prec:
                return left
            self.advance()
            if text == "in" and self.at("("):
                self.advance()
                items = []
                while self.peek() is not None and not self.at(")"):
                    items.append(self.parse_expression())
                    self.accept(",")
                self.expect(")")
                left = TreeNode("in_expression", [left, TreeNode("value_tuple", items)])
                continue
            if text == "is":
                self.accept("not")
                if self.accept("null"):
                    left = TreeNode("null_check", [left])
                    continue
            if text == "between":
                low = self.parse_binary(_BINARY_PRECEDENCE["between"] + 1)
                self.expect("and")
                high = self.parse_binary(_BINARY_PRECEDENCE["between"] + 1)
                left = TreeNode("between_expression", [left, low, high])
                continue
            right = self.parse_binary(prec + 1)
            left = TreeNode("binary_expression", [left, right])

    def parse_unary(self) -> TreeNode:
        if self.at("not") or self.at("-") or self.at("+"):
            self.advance()
            return TreeNode("unary_expression", [self.parse_unary()])
        return self.parse_primary()

    def parse_primary(self) -> TreeNode:
        tok = self.peek()
        if tok is None:
            self.errors += 1
            return self.leaf(ERROR_KIND)
        if tok.kind == NUMBER:
            return self.leaf("number_literal", self.advance().text)
        if tok.kind == STRING:
            return self.leaf("string_literal", self.advance().text)
        if tok.text == "(":
            self.advance()
            if self.at("select"):
                inner = self.parse_select()
            else:
                inner = self.parse_expression()
            self.expect(")")
            return TreeNode("parenthesized_expression", [inner])
        if tok.text == "*":
            self.advance()
            return TreeNode("all_columns", [])
        if tok.kind == IDENT:
            head = self.kw()
            if head == "null":
                self.advance()
                return self.leaf("null_literal", tok.text)
            if head in ("true", "false"):
                self.advance()
                return self.leaf("boolean_literal", tok.text)
            if head == "case":
                return self.parse_case_expression()
            name = self.advance().text
            if self.at("("):
                self.advance()
                args = []
                while self.peek() is not None and not self.at(")"):
                    args.append(self.parse_expression())
                    self.accept(",")
                self.expect(")")
                return TreeNode(
                    "call_expression",
                    [self.leaf("identifier", name), TreeNode("argument_list", args)],
                )
            node = self.leaf("identifier", name)
            while self.accept("."):
                if self.peek() is not None and self.peek().kind == IDENT:
                    node = TreeNode("member_expression", [node, self.leaf("identifier", self.advance().text)])
                elif self.at("*"):
                    self.advance()
                    node = TreeNode("member_expression", [node, TreeNode("all_columns", [])])
                else:
                    break
            return node
        self.errors += 1
        return self.leaf(ERROR_KIND, self.advance().text)

    def parse_case_expression(self) -> TreeNode:
        self.advance()  # case
        children = []
        while self.accept("when"):
            arm = [self.parse_expression()]
            self.expect("then")
            arm.append(self.parse_expression())
            children.append(TreeNode("when_clause", arm))
        if self.accept("else"):
            children.append(TreeNode("else_clause", [self.parse_expression()]))
        self.expect("end")
        return TreeNode("case_expression", children)


def parse(source: str, include_leaf_text: bool = False) -> SyntaxTree:
    tokens = lex(source, _LEX_RULES)
    parser = _SqlParser(tokens, include_leaf_text)
    root = parser.parse_program()
    return SyntaxTree(root=root, had_parse_errors=parser.errors > 0)
