"""Errors raised by the type checkers of both calculi."""

from __future__ import annotations


class TypeCheckError(Exception):
    """``location`` is the path of field names from the root to the offending node."""

    def __init__(self, location: tuple[str, ...], expected: str, found: str) -> None:
        where = "/".join(location) or "<root>"
        super().__init__(f"at {where}: expected {expected}, found {found}")
        self.location = location
        self.expected = expected
        self.found = found


class UnboundVariable(TypeCheckError):
    def __init__(self, location: tuple[str, ...], index: int, depth: int) -> None:
        super().__init__(location, f"index < {depth}", f"variable #{index}")
        self.index = index
