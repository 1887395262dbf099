"""Recursive-descent parser for the brace languages.

One engine covers java, javascript, typescript, csharp, and kotlin; a small
dialect table switches keyword sets and declaration styles.  The output uses
a shared node-kind vocabulary (program, variable_declaration,
binary_expression, call_expression, identifier, ...), so identifier spelling
and operator choice are invisible at the default kind-only label level.

The parser is total: anything it cannot place becomes an ERROR node and it
moves on.  Operator tokens inside binary/assignment/update expressions are
not emitted as child nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..tree import SyntaxTree, TreeNode
from .tokens import C_OPERATORS, IDENT, NUMBER, PUNCT, STRING, LexRules, Token, lex

ERROR_KIND = "ERROR"

_PRIMITIVES = {
    "int", "long", "short", "byte", "char", "boolean", "bool", "float",
    "double", "void", "string", "object", "decimal", "uint", "ulong",
}

_MODIFIERS = {
    "public", "private", "protected", "static", "final", "abstract",
    "synchronized", "native", "transient", "volatile", "sealed", "override",
    "virtual", "readonly", "async", "export", "default", "internal", "open",
    "inline", "lateinit", "suspend", "data", "const",
}

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>=", "**="}

_BINARY_PRECEDENCE = {
    "||": 1, "or": 1,
    "&&": 2, "and": 2,
    "|": 3,
    "^": 4,
    "&": 5,
    "==": 6, "!=": 6, "===": 6, "!==": 6,
    "<": 7, ">": 7, "<=": 7, ">=": 7, "instanceof": 7, "is": 7, "in": 7, "as": 7,
    "<<": 8, ">>": 8, ">>>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
    "..": 11,
    "?:": 1,
}

_STATEMENT_KEYWORDS = {
    "if", "for", "while", "do", "return", "break", "continue", "throw",
    "try", "switch", "when", "class", "interface", "enum", "object",
}


@dataclass(frozen=True)
class Dialect:
    name: str
    decl_keywords: frozenset[str] = frozenset()
    fun_keywords: frozenset[str] = frozenset()
    type_first: bool = False  # java/csharp style `int x = 0;`
    typed_params: bool = False  # `a: Int` parameter annotations


DIALECTS = {
    "java": Dialect("java", type_first=True),
    "csharp": Dialect("csharp", decl_keywords=frozenset({"var"}), type_first=True),
    "javascript": Dialect(
        "javascript",
        decl_keywords=frozenset({"var", "let", "const"}),
        fun_keywords=frozenset({"function"}),
    ),
    "typescript": Dialect(
        "typescript",
        decl_keywords=frozenset({"var", "let", "const"}),
        fun_keywords=frozenset({"function"}),
        typed_params=True,
    ),
    "kotlin": Dialect(
        "kotlin",
        decl_keywords=frozenset({"val", "var"}),
        fun_keywords=frozenset({"fun"}),
        typed_params=True,
    ),
}

_LEX_RULES = LexRules(operators=C_OPERATORS)


class _Parser:
    def __init__(self, tokens: list[Token], dialect: Dialect, leaf_text: bool):
        self.tokens = tokens
        self.dialect = dialect
        self.leaf_text = leaf_text
        self.pos = 0
        self.errors = 0
        # a dialect's declaration keywords are never plain modifiers
        self.modifiers = _MODIFIERS - dialect.decl_keywords - dialect.fun_keywords

    # --- token helpers -------------------------------------------------
    def peek(self, ahead: int = 0) -> Token | None:
        index = self.pos + ahead
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.text == text

    def at_any(self, texts) -> bool:
        tok = self.peek()
        return tok is not None and tok.text in texts

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

    def error_node(self) -> TreeNode:
        self.errors += 1
        tok = self.advance()
        return self.leaf(ERROR_KIND, tok.text)

    # --- program / statements ------------------------------------------
    def parse_program(self) -> TreeNode:
        children = []
        while self.peek() is not None:
            before = self.pos
            children.append(self.parse_statement())
            if self.pos == before:  # totality guard, should not trigger
                children.append(self.error_node())
        return TreeNode("program", children)

    def parse_block(self) -> TreeNode:
        children = []
        self.expect("{")
        while self.peek() is not None and not self.at("}"):
            before = self.pos
            children.append(self.parse_statement())
            if self.pos == before:
                children.append(self.error_node())
        self.expect("}")
        return TreeNode("block", children)

    def parse_statement(self) -> TreeNode:
        tok = self.peek()
        assert tok is not None
        text = tok.text

        if text == ";":
            self.advance()
            return TreeNode("empty_statement", [])
        if text == "{":
            return self.parse_block()
        if text == "}":
            return self.error_node()  # stray close brace
        if text == "if":
            return self.parse_if()
        if text == "for":
            return self.parse_for()
        if text == "while":
            return self.parse_while()
        if text == "do":
            return self.parse_do()
        if text == "return":
            self.advance()
            children = []
            if not self.at_any({";", "}"}) and self.peek() is not None:
                children.append(self.parse_expression())
            self.accept(";")
            return TreeNode("return_statement", children)
        if text in ("break", "continue"):
            self.advance()
            self.accept(";")
            return TreeNode(f"{text}_statement", [])
        if text == "throw":
            self.advance()
            node = TreeNode("throw_statement", [self.parse_expression()])
            self.accept(";")
            return node
        if text == "try":
            return self.parse_try()
        if text in ("switch", "when"):
            return self.parse_switch()
        if text in ("class", "interface", "enum", "object") and self._next_is_ident():
            return self.parse_class()

        modifiers = 0
        while self.at_any(self.modifiers) and self._modifier_ahead():
            self.advance()
            modifiers += 1

        tok = self.peek()
        if tok is None:
            return TreeNode("empty_statement", [])
        text = tok.text

        if text in ("class", "interface", "enum", "object") and self._next_is_ident():
            return self.parse_class()
        if text in self.dialect.fun_keywords:
            return self.parse_function()
        if text in self.dialect.decl_keywords:
            return self.parse_variable_declaration(keyword=True)
        if self.dialect.type_first:
            shape = self._type_first_shape()
            if shape == "function":
                return self.parse_typed_function()
            if shape == "variable":
                return self.parse_variable_declaration(keyword=False)
        if modifiers and text in _STATEMENT_KEYWORDS:
            return self.parse_statement()

        node = TreeNode("expression_statement", [self.parse_expression()])
        self.accept(";")
        return node

    def _next_is_ident(self) -> bool:
        nxt = self.peek(1)
        return nxt is not None and nxt.kind == IDENT

    def _modifier_ahead(self) -> bool:
        # a modifier must be followed by more declaration, not end a statement
        nxt = self.peek(1)
        return nxt is not None and (nxt.kind == IDENT or nxt.text in ("{", "<"))

    # --- declarations ---------------------------------------------------
    def _type_first_shape(self) -> str | None:
        """Lookahead: does a `Type name ...` declaration start here?"""
        tok = self.peek()
        if tok is None or tok.kind != IDENT:
            return None
        if tok.text in _PRIMITIVES or tok.text[0].isupper() or tok.text in ("var",):
            index = self.pos + 1
            index = self._skip_type_suffix(index)
            name = self.tokens[index] if index < len(self.tokens) else None
            after = self.tokens[index + 1] if index + 1 < len(self.tokens) else None
            if name is not None and name.kind == IDENT:
                if after is not None and after.text == "(":
                    return "function"
                if after is not None and after.text == ":":
                    return "foreach"
                if after is None or after.text in ("=", ";", ",", ")"):
                    return "variable"
        return None

    def _skip_type_suffix(self, index: int) -> int:
        # generic arguments: balanced <...>
        if index < len(self.tokens) and self.tokens[index].text == "<":
            depth = 0
            while index < len(self.tokens):
                t = self.tokens[index].text
                if t == "<":
                    depth += 1
                elif t == ">":
                    depth -= 1
                    if depth == 0:
                        index += 1
                        break
                elif t == ">>":
                    depth -= 2
                    if depth <= 0:
                        index += 1
                        break
                elif t in (";", "{", ")"):
                    break
                index += 1
        # array suffixes / nullability
        while index + 1 < len(self.tokens) and self.tokens[index].text == "[" and self.tokens[index + 1].text == "]":
            index += 2
        if index < len(self.tokens) and self.tokens[index].text == "?":
            index += 1
        return index

    def parse_type(self) -> TreeNode:
        parts = []
        tok = self.peek()
        if tok is not None and tok.kind == IDENT:
            parts.append(self.advance().text)
            while self.accept("."):
                parts.append(".")
                if self.peek() is not None and self.peek().kind == IDENT:
                    parts.append(self.advance().text)
            end = self._skip_type_suffix(self.pos)
            parts.extend(t.text for t in self.tokens[self.pos:end])
            self.pos = end
        else:
            self.errors += 1
        return self.leaf("type", "".join(parts) or None)

    def parse_variable_declaration(self, keyword: bool) -> TreeNode:
        children = []
        if keyword:
            self.advance()  # var/let/const/val
        else:
            children.append(self.parse_type())
        declarators = []
        while True:
            name = None
            if self.peek() is not None and self.peek().kind == IDENT:
                name = self.leaf("identifier", self.advance().text)
            else:
                self.errors += 1
                name = self.leaf(ERROR_KIND)
            decl_children = [name]
            if self.dialect.typed_params and self.accept(":"):
                decl_children.append(self.parse_type())
            if self.accept("="):
                decl_children.append(self.parse_expression())
            declarators.append(TreeNode("variable_declarator", decl_children))
            if not self.accept(","):
                break
            if self.peek() is None or self.peek().kind != IDENT:
                break
        children.extend(declarators)
        self.accept(";")
        return TreeNode("variable_declaration", children)

    def parse_parameter_list(self) -> TreeNode:
        params = []
        self.expect("(")
        while self.peek() is not None and not self.at(")"):
            parts = []
            while self.at_any(self.modifiers) or self.at_any(self.dialect.decl_keywords):
                self.advance()
            if self.dialect.type_first:
                shape_start = self.pos
                type_node = self.parse_type()
                if self.peek() is not None and self.peek().kind == IDENT:
                    parts = [type_node, self.leaf("identifier", self.advance().text)]
                else:
                    # untyped parameter after all; rewind to treat it as the name
                    self.pos = shape_start
                    if self.peek() is not None and self.peek().kind == IDENT:
                        parts = [self.leaf("identifier", self.advance().text)]
            else:
                if self.peek() is not None and self.peek().kind == IDENT:
                    parts = [self.leaf("identifier", self.advance().text)]
                if self.accept(":"):
                    parts.append(self.parse_type())
            if self.accept("="):
                parts.append(self.parse_expression())
            if not parts:
                parts = [self.error_node()]
            params.append(TreeNode("parameter", parts))
            if not self.accept(","):
                break
        self.expect(")")
        return TreeNode("parameter_list", params)

    def parse_function(self) -> TreeNode:
        self.advance()  # function/fun
        children = []
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        children.append(self.parse_parameter_list())
        if self.accept(":"):
            children.append(self.parse_type())
        if self.accept("="):  # kotlin expression body
            children.append(self.parse_expression())
        elif self.at("{"):
            children.append(self.parse_block())
        return TreeNode("function_declaration", children)

    def parse_typed_function(self) -> TreeNode:
        children = [self.parse_type()]
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        children.append(self.parse_parameter_list())
        while not self.at("{") and not self.at(";") and self.peek() is not None:
            self.advance()  # throws clauses and the like
        if self.at("{"):
            children.append(self.parse_block())
        else:
            self.accept(";")
        return TreeNode("function_declaration", children)

    def parse_class(self) -> TreeNode:
        self.advance()  # class/interface/enum/object
        children = []
        if self.peek() is not None and self.peek().kind == IDENT:
            children.append(self.leaf("identifier", self.advance().text))
        while self.peek() is not None and not self.at("{"):
            self.advance()  # extends/implements clauses, primary constructors
        if self.at("{"):
            body = self.parse_block()
            children.append(TreeNode("class_body", list(body.children)))
        return TreeNode("class_declaration", children)

    # --- control flow ---------------------------------------------------
    def parse_condition(self) -> TreeNode:
        if self.accept("("):
            inner = self.parse_expression()
            self.expect(")")
            return TreeNode("parenthesized_expression", [inner])
        return self.parse_expression()

    def parse_if(self, as_expression: bool = False) -> TreeNode:
        self.advance()
        children = [self.parse_condition()]
        children.append(self.parse_expression() if as_expression else self.parse_statement())
        if self.accept("else"):
            children.append(self.parse_expression() if as_expression else self.parse_statement())
        return TreeNode("if_expression" if as_expression else "if_statement", children)

    def parse_for(self) -> TreeNode:
        self.advance()
        children = []
        self.expect("(")
        # init
        if not self.accept(";"):
            if (
                self.at_any(self.dialect.decl_keywords)
                and self.peek(1) is not None
                and self.peek(1).kind == IDENT
                and self.peek(2) is not None
                and self.peek(2).text in ("of", "in")
            ):
                # `for (let x of xs)` / `for (val x in xs)`
                self.advance()
                name = self.leaf("identifier", self.advance().text)
                self.advance()
                children.append(TreeNode("for_each_clause", [name, self.parse_expression()]))
                self.expect(")")
                children.append(self.parse_statement())
                return TreeNode("for_statement", children)
            if self.at_any(self.dialect.decl_keywords):
                children.append(self.parse_variable_declaration(keyword=True))
            elif self.dialect.type_first and self._type_first_shape() == "foreach":
                # java enhanced for: `for (Type name : iterable)`
                type_node = self.parse_type()
                name = self.leaf("identifier", self.advance().text)
                self.advance()  # ':'
                children.append(
                    TreeNode("for_each_clause", [type_node, name, self.parse_expression()])
                )
                self.expect(")")
                children.append(self.parse_statement())
                return TreeNode("for_statement", children)
            elif self.dialect.type_first and self._type_first_shape() == "variable":
                children.append(self.parse_variable_declaration(keyword=False))
            elif self.peek() is not None and self.peek().kind == IDENT and self.peek(1) is not None and self.peek(1).text in (":", "in"):
                # enhanced for: `for (x in xs)` / `for (Type x : xs)`
                name = self.leaf("identifier", self.advance().text)
                self.advance()
                children.append(TreeNode("for_each_clause", [name, self.parse_expression()]))
                self.expect(")")
                children.append(self.parse_statement())
                return TreeNode("for_statement", children)
            else:
                children.append(self.parse_expression())
                if self.at_any({":", "in", "of"}):
                    self.advance()
                    children = [TreeNode("for_each_clause", children + [self.parse_expression()])]
                    self.expect(")")
                    children.append(self.parse_statement())
                    return TreeNode("for_statement", children)
                self.accept(";")
        # java enhanced for survives the declaration branch via ':'
        if children and self.accept(":"):
            children = [TreeNode("for_each_clause", children + [self.parse_expression()])]
            self.expect(")")
            children.append(self.parse_statement())
            return TreeNode("for_statement", children)
        # condition
        if not self.at(";") and not self.at(")"):
            children.append(self.parse_expression())
        self.accept(";")
        # update
        if not self.at(")") and self.peek() is not None:
            children.append(self.parse_expression())
        self.expect(")")
        children.append(self.parse_statement())
        return TreeNode("for_statement", children)

    def parse_while(self) -> TreeNode:
        self.advance()
        children = [self.parse_condition(), self.parse_statement()]
        return TreeNode("while_statement", children)

    def parse_do(self) -> TreeNode:
        self.advance()
        body = self.parse_statement()
        children = [body]
        if self.expect("while"):
            children.append(self.parse_condition())
        self.accept(";")
        return TreeNode("do_statement", children)

    def parse_try(self) -> TreeNode:
        self.advance()
        children = [self.parse_block() if self.at("{") else self.parse_statement()]
        while self.at("catch"):
            self.advance()
            clause = []
            if self.accept("("):
                while self.peek() is not None and not self.at(")"):
                    tok = self.advance()
                    if tok.kind == IDENT and not self.at(")"):
                        continue
                    if tok.kind == IDENT:
                        clause.append(self.leaf("identifier", tok.text))
            # tolerate both `catch (E e)` and bare `catch`
            if self.at(")"):
                self.advance()
            clause.append(self.parse_block() if self.at("{") else self.parse_statement())
            children.append(TreeNode("catch_clause", clause))
        if self.accept("finally"):
            children.append(
                TreeNode("finally_clause", [self.parse_block() if self.at("{") else self.parse_statement()])
            )
        return TreeNode("try_statement", children)

    def parse_switch(self) -> TreeNode:
        self.advance()
        children = []
        if self.at("("):
            children.append(self.parse_condition())
        if self.at("{"):
            self.advance()
            case_children: list[TreeNode] | None = None
            while self.peek() is not None and not self.at("}"):
                if self.at_any({"case", "default"}):
                    if case_children is not None:
                        children.append(TreeNode("switch_case", case_children))
                    case_children = []
                    self.advance()
                    if not self.at(":"):
                        case_children.append(self.parse_expression())
                    self.accept(":")
                    continue
                before = self.pos
                stmt = self.parse_statement()
                if case_children is None:
                    case_children = []
                case_children.append(stmt)
                if self.pos == before:
                    break
            if case_children is not None:
                children.append(TreeNode("switch_case", case_children))
            self.expect("}")
        return TreeNode("switch_statement", children)

    # --- expressions ----------------------------------------------------
    def parse_expression(self) -> TreeNode:
        return self.parse_assignment()

    def parse_assignment(self) -> TreeNode:
        left = self.parse_ternary()
        tok = self.peek()
        if tok is not None and tok.text in _ASSIGN_OPS:
            self.advance()
            right = self.parse_assignment()
            return TreeNode("assignment_expression", [left, right])
        return left

    def parse_ternary(self) -> TreeNode:
        cond = self.parse_binary(1)
        if self.accept("?"):
            then = self.parse_expression()
            self.expect(":")
            other = self.parse_expression()
            return TreeNode("conditional_expression", [cond, then, other])
        return cond

    def parse_binary(self, min_prec: int) -> TreeNode:
        left = self.parse_unary()
        while True:
            tok = self.peek()
            if tok is None:
                return left
            prec = _BINARY_PRECEDENCE.get(tok.text)
            if prec is None or prec < min_prec:
                return left
            # `<` opening a generic argument list is handled by callers; at
            # expression level it is comparison
            self.advance()
            right = self.parse_binary(prec + 1)
            left = TreeNode("binary_expression", [left, right])

    def parse_unary(self) -> TreeNode:
        tok = self.peek()
        if tok is None:
            self.errors += 1
            return self.leaf(ERROR_KIND)
        if tok.text in ("++", "--"):
            self.advance()
            return TreeNode("update_expression", [self.parse_unary()])
        if tok.text in ("!", "~", "+", "-", "typeof", "await", "not", "delete"):
            self.advance()
            return TreeNode("unary_expression", [self.parse_unary()])
        if tok.text == "new":
            self.advance()
            type_node = self.parse_type()
            children = [type_node]
            if self.at("("):
                children.append(self.parse_argument_list())
            elif self.at("["):
                while self.accept("["):
                    if not self.at("]"):
                        children.append(self.parse_expression())
                    self.expect("]")
            return TreeNode("object_creation_expression", children)
        return self.parse_postfix()

    def parse_postfix(self) -> TreeNode:
        node = self.parse_primary()
        while True:
            if self.at("("):
                node = TreeNode("call_expression", [node, self.parse_argument_list()])
            elif self.at(".") or self.at("?."):
                self.advance()
                if self.peek() is not None and self.peek().kind == IDENT:
                    member = self.leaf("identifier", self.advance().text)
                    node = TreeNode("member_expression", [node, member])
                else:
                    node = TreeNode("member_expression", [node, self.error_node() if self.peek() is not None else self.leaf(ERROR_KIND)])
            elif self.at("["):
                self.advance()
                index = self.parse_expression() if not self.at("]") else self.leaf(ERROR_KIND)
                self.expect("]")
                node = TreeNode("array_access", [node, index])
            elif self.at("++") or self.at("--"):
                self.advance()
                node = TreeNode("update_expression", [node])
            elif self.at("!!"):
                self.advance()
            else:
                return node

    def parse_argument_list(self) -> TreeNode:
        self.expect("(")
        args = []
        while self.peek() is not None and not self.at(")"):
            args.append(self.parse_expression())
            if not self.accept(","):
                break
        self.expect(")")
        return TreeNode("argument_list", args)

    def parse_primary(self) -> TreeNode:
        tok = self.peek()
        if tok is None:
            self.errors += 1
            return self.leaf(ERROR_KIND)
        if tok.kind == NUMBER:
            return self.leaf("number_literal", self.advance().text)
        if tok.kind == STRING:
            return self.leaf("string_literal", self.advance().text)
        if tok.text in ("true", "false"):
            return self.leaf("boolean_literal", self.advance().text)
        if tok.text in ("null", "nil", "undefined"):
            self.advance()
            return self.leaf("null_literal", tok.text)
        if tok.text == "if":
            return self.parse_if(as_expression=True)
        if tok.text == "(":
            self.advance()
            # possible arrow-function head: scan for `) =>` / `) ->`
            inner: list[TreeNode] = []
            if not self.at(")"):
                inner.append(self.parse_expression())
                while self.accept(","):
                    inner.append(self.parse_expression())
            self.expect(")")
            if self.at("=>") or self.at("->"):
                self.advance()
                body = self.parse_block() if self.at("{") else self.parse_expression()
                return TreeNode("lambda_expression", inner + [body])
            if len(inner) == 1:
                return TreeNode("parenthesized_expression", inner)
            return TreeNode("parenthesized_expression", inner or [self.leaf(ERROR_KIND)])
        if tok.text == "[":
            self.advance()
            items = []
            while self.peek() is not None and not self.at("]"):
                items.append(self.parse_expression())
                if not self.accept(","):
                    break
            self.expect("]")
            return TreeNode("array_literal", items)
        if tok.text == "{":
            # object literal (js/ts) or trailing lambda (kotlin); shallow parse
            self.advance()
            items = []
            depth = 1
            key_parts: list[TreeNode] = []
            while self.peek() is not None and depth > 0:
                t = self.peek().text
                if t == "{":
                    depth += 1
                    self.advance()
                elif t == "}":
                    depth -= 1
                    self.advance()
                elif depth == 1 and self.peek().kind in (IDENT, NUMBER, STRING):
                    items.append(self.leaf("identifier" if self.peek().kind == IDENT else "number_literal", self.advance().text))
                else:
                    self.advance()
            return TreeNode("object_literal", items)
        if tok.kind == IDENT:
            ident = self.leaf("identifier", self.advance().text)
            if self.at("=>") or self.at("->"):
                self.advance()
                body = self.parse_block() if self.at("{") else self.parse_expression()
                return TreeNode("lambda_expression", [ident, body])
            return ident
        return self.error_node()


def parse(source: str, language: str, include_leaf_text: bool = False) -> SyntaxTree:
    dialect = DIALECTS[language]
    tokens = lex(source, _LEX_RULES)
    parser = _Parser(tokens, dialect, include_leaf_text)
    root = parser.parse_program()
    return SyntaxTree(root=root, had_parse_errors=parser.errors > 0)
