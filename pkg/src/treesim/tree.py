"""Ordered labeled rooted trees plus a bracket-notation interchange format.

Trees are what the parser frontend produces and what the edit-distance core
consumes.  The bracket form ``{label{child1}{child2}}`` is the single fixture
format used by tests and oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class BracketParseError(ValueError):
    """Malformed bracket notation. Carries the byte offset of the defect."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


@dataclass
class TreeNode:
    """One node: a non-empty kind label and an ordered child sequence."""

    label: str
    children: list["TreeNode"] = field(default_factory=list)

    def __post_init__(self):
        if not self.label:
            raise ValueError("node label must be non-empty")

    def subtree_size(self) -> int:
        total = 1
        for child in self.children:
            total += child.subtree_size()
        return total

    def preorder(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def structurally_equal(self, other: "TreeNode") -> bool:
        if self.label != other.label or len(self.children) != len(other.children):
            return False
        return all(
            a.structurally_equal(b) for a, b in zip(self.children, other.children)
        )


@dataclass
class SyntaxTree:
    """A parsed tree with a cached node count and a parse-error flag."""

    root: TreeNode
    node_total: int = 0
    had_parse_errors: bool = False

    def __post_init__(self):
        if self.node_total == 0:
            self.node_total = self.root.subtree_size()

    def structurally_equal(self, other: "SyntaxTree") -> bool:
        return self.root.structurally_equal(other.root)


def node_count(tree: SyntaxTree) -> int:
    """Total number of nodes reachable from the root (cached)."""
    return tree.node_total


_ESCAPES = {"{": "\\{", "}": "\\}", "\\": "\\\\"}


def _escape_label(label: str) -> str:
    if "{" in label or "}" in label or "\\" in label:
        return "".join(_ESCAPES.get(ch, ch) for ch in label)
    return label


def to_bracket(tree: SyntaxTree) -> str:
    """Serialize to canonical bracket notation, escaping braces and backslashes."""
    parts: list[str] = []

    def emit(node: TreeNode):
        parts.append("{")
        parts.append(_escape_label(node.label))
        for child in node.children:
            emit(child)
        parts.append("}")

    emit(tree.root)
    return "".join(parts)


def from_bracket(text: str) -> SyntaxTree:
    """Parse bracket notation back into a tree.

    Raises BracketParseError with a byte offset on unbalanced braces, empty
    labels, or trailing garbage.
    """
    pos = 0
    n = len(text)

    # skip insignificant whitespace between nodes only, never inside labels
    def skip_ws():
        nonlocal pos
        while pos < n and text[pos] in " \t\r\n":
            pos += 1

    def parse_node() -> TreeNode:
        nonlocal pos
        if pos >= n or text[pos] != "{":
            raise BracketParseError("expected '{'", pos)
        open_at = pos
        pos += 1
        label_chars: list[str] = []
        while pos < n and text[pos] not in "{}":
            ch = text[pos]
            if ch == "\\":
                if pos + 1 >= n:
                    raise BracketParseError("dangling escape", pos)
                label_chars.append(text[pos + 1])
                pos += 2
            else:
                label_chars.append(ch)
                pos += 1
        label = "".join(label_chars)
        if not label:
            raise BracketParseError("empty label", open_at + 1)
        children: list[TreeNode] = []
        while True:
            if pos >= n:
                raise BracketParseError("unbalanced braces: missing '}'", open_at)
            if text[pos] == "{":
                children.append(parse_node())
            elif text[pos] == "}":
                pos += 1
                return TreeNode(label, children)
            else:  # unreachable: label loop stops only at braces or EOF
                raise BracketParseError("unexpected character", pos)

    skip_ws()
    root = parse_node()
    skip_ws()
    if pos != n:
        raise BracketParseError("trailing content after root tree", pos)
    return SyntaxTree(root)
