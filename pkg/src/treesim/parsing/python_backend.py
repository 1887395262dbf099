"""Python backend on top of the stdlib ast module.

Node labels are the ast class names (Module, FunctionDef, Compare, ...).
Expression-context markers (Load/Store/Del) are bookkeeping, not syntax, and
are dropped so that reads and writes of a name look identical.

Malformed input never raises: the longest parseable line prefix is kept and
the remainder becomes one ERROR node per line, with the line's tokens as
children so that two broken files still compare gradually.
"""

from __future__ import annotations

import ast
import re

from ..tree import SyntaxTree, TreeNode

ERROR_KIND = "ERROR"

_TOKEN_RE = re.compile(r"[A-Za-z0-9_]+|[^\sA-Za-z0-9_]")

# how many prefix lengths to try when recovering from a syntax error
_RECOVERY_ATTEMPTS = 50


def _leaf_text(node: ast.AST) -> str | None:
    if isinstance(node, ast.Name):
        return node.id
    if isinstance(node, ast.Constant):
        return repr(node.value)
    if isinstance(node, ast.arg):
        return node.arg
    return None


def _convert(node: ast.AST, leaf_text: bool) -> TreeNode:
    children = [
        _convert(child, leaf_text)
        for child in ast.iter_child_nodes(node)
        if not isinstance(child, ast.expr_context)
    ]
    label = type(node).__name__
    if leaf_text and not children:
        text = _leaf_text(node)
        if text is not None:
            label = f"{label}:{text}"
    return TreeNode(label, children)


def _error_lines(lines: list[str], leaf_text: bool) -> list[TreeNode]:
    nodes = []
    for raw in lines:
        words = _TOKEN_RE.findall(raw)
        if not words:
            continue
        children = [
            TreeNode(f"error_token:{w}" if leaf_text else "error_token", [])
            for w in words
        ]
        nodes.append(TreeNode(ERROR_KIND, children))
    return nodes


def parse(source: str, include_leaf_text: bool = False) -> SyntaxTree:
    try:
        module = ast.parse(source)
        return SyntaxTree(root=_convert(module, include_leaf_text))
    except (SyntaxError, ValueError, RecursionError) as exc:
        bad_line = getattr(exc, "lineno", None)
    lines = source.splitlines()

    # Longest parseable prefix: start just above the reported error line,
    # then walk upward a bounded number of steps.  cut == 0 always parses.
    first_try = min(len(lines), (bad_line or len(lines))) - 1
    cuts = list(range(max(first_try, 0), -1, -1))[:_RECOVERY_ATTEMPTS] + [0]
    module = ast.parse("")
    good = 0
    for cut in cuts:
        try:
            module = ast.parse("\n".join(lines[:cut]))
            good = cut
            break
        except (SyntaxError, ValueError, RecursionError):
            continue

    root = _convert(module, include_leaf_text)
    root = TreeNode(
        root.label, list(root.children) + _error_lines(lines[good:], include_leaf_text)
    )
    return SyntaxTree(root=root, had_parse_errors=True)
