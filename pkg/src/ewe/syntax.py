"""Reading and writing the line-oriented ``.ewe`` text format.

    # comment
    eq: X X Y = Z W Z
    order: (2,1) < (1,1) < (2,2) < (1,2) < (1,3)~(2,3)

The trivial equation is ``eq: =`` with an empty ``order:`` line.
"""

from __future__ import annotations

import re

from .core import ExtendedWordEquation, make_ewe

NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
BOUNDARY = re.compile(r"\(\s*([12])\s*,\s*(\d+)\s*\)")


class EweSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        self.message, self.line, self.column = message, line, column
        super().__init__(f"line {line}, column {column}: {message}")


def _strip_comment(text: str) -> str:
    return text.split("#", 1)[0]


def _parse_vars(chunk: str, lineno: int, offset: int) -> list[str]:
    out = []
    for m in re.finditer(r"\S+", chunk):
        if not NAME.match(m.group()):
            raise EweSyntaxError(f"bad variable name {m.group()!r}", lineno, offset + m.start() + 1)
        out.append(m.group())
    return out


def _parse_order(body: str, lineno: int, offset: int) -> list[list[tuple[int, int]]]:
    if not body.strip():
        return []
    ranks = []
    pos = 0
    for group in body.split("<"):
        start = offset + pos
        pos += len(group) + 1
        if not group.strip():
            raise EweSyntaxError("empty rank group", lineno, start + 1)
        cls = []
        gpos = 0
        for item in group.split("~"):
            col = start + gpos
            gpos += len(item) + 1
            m = BOUNDARY.fullmatch(item.strip())
            if m is None:
                lead = len(item) - len(item.lstrip())
                raise EweSyntaxError(f"expected a boundary like (1,2), got {item.strip()!r}",
                                     lineno, col + lead + 1)
            cls.append((int(m.group(1)), int(m.group(2))))
        ranks.append(cls)
    return ranks


def parse_ewe(text: str) -> ExtendedWordEquation:
    """Parse ``.ewe`` text; raises EweSyntaxError or core.InvalidEquation."""
    eq_line = order_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        key, sep, body = line.partition(":")
        key_clean = key.strip()
        if not sep or key_clean not in ("eq", "order"):
            col = len(line) - len(line.lstrip()) + 1
            raise EweSyntaxError("expected 'eq:' or 'order:'", lineno, col)
        offset = len(key) + 1
        if key_clean == "eq":
            if eq_line is not None:
                raise EweSyntaxError("duplicate 'eq:' line", lineno, 1)
            eq_line = (lineno, offset, body)
        else:
            if order_line is not None:
                raise EweSyntaxError("duplicate 'order:' line", lineno, 1)
            order_line = (lineno, offset, body)
    if eq_line is None:
        raise EweSyntaxError("missing 'eq:' line", 1, 1)
    if order_line is None:
        raise EweSyntaxError("missing 'order:' line", eq_line[0] + 1, 1)

    lineno, offset, body = eq_line
    if body.count("=") != 1:
        raise EweSyntaxError("equation needs exactly one '='", lineno, offset + 1)
    left, right = body.split("=")
    u1 = _parse_vars(left, lineno, offset)
    u2 = _parse_vars(right, lineno, offset + len(left) + 1)
    ranks = _parse_order(order_line[2], order_line[0], order_line[1])
    return make_ewe(u1, u2, ranks)


def format_order(e: ExtendedWordEquation) -> str:
    return str(e.order)


def format_ewe(e: ExtendedWordEquation) -> str:
    eq = " ".join(["eq:", *e.u1, "=", *e.u2])
    order = f"order: {format_order(e)}".rstrip()
    return f"{eq}\n{order}\n"


def read_ewe(path) -> ExtendedWordEquation:
    with open(path, encoding="utf-8") as fh:
        return parse_ewe(fh.read())
