"""Static grid maps in the MovingAI benchmark text format."""

from __future__ import annotations

from typing import Sequence

TRAVERSABLE_CHARS = frozenset(".G")
BLOCKED_CHARS = frozenset("@OTSW")


class MapParseError(ValueError):
    """Raised for malformed map text; message carries line (and column)."""


class GridMap:
    """Immutable 2-D traversability table indexed (row, col).

    Out-of-bounds queries are never errors: they report non-traversable.
    """

    __slots__ = ("width", "height", "_rows")

    def __init__(self, rows: Sequence[Sequence[bool]]):
        self.height = len(rows)
        self.width = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != self.width:
                raise ValueError("ragged traversability table")
        self._rows = tuple(tuple(r) for r in rows)

    def is_traversable(self, row: int, col: int) -> bool:
        if 0 <= row < self.height and 0 <= col < self.width:
            return self._rows[row][col]
        return False

    def free_cells(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.height) for c in range(self.width)
                if self._rows[r][c]]

    def count_traversable(self) -> int:
        return sum(sum(row) for row in self._rows)

    def __eq__(self, other):
        return isinstance(other, GridMap) and self._rows == other._rows

    def __repr__(self):
        return f"GridMap({self.height}x{self.width})"


def parse_movingai(text: str) -> GridMap:
    """Parse MovingAI .map text.

    Header must read exactly: `type octile`, `height H`, `width W`, `map`,
    one per line, followed by H lines of W characters.  Trailing whitespace
    and CR/LF endings are tolerated.  `.` and `G` are traversable; `@ O T S W`
    are blocked.
    """
    lines = text.splitlines()
    if len(lines) < 4:
        raise MapParseError("line 1: truncated header")
    if lines[0].strip() != "type octile":
        raise MapParseError(f"line 1: expected 'type octile', got {lines[0].strip()!r}")
    height = _header_int(lines[1], "height", 2)
    width = _header_int(lines[2], "width", 3)
    if lines[3].strip() != "map":
        raise MapParseError(f"line 4: expected 'map', got {lines[3].strip()!r}")
    body = [ln.rstrip() for ln in lines[4:]]
    while body and body[-1] == "":
        body.pop()
    if len(body) != height:
        raise MapParseError(f"line 5: expected {height} map rows, got {len(body)}")
    rows: list[list[bool]] = []
    for i, ln in enumerate(body):
        if len(ln) != width:
            raise MapParseError(f"line {5 + i}: expected {width} characters, got {len(ln)}")
        row = []
        for j, ch in enumerate(ln):
            if ch in TRAVERSABLE_CHARS:
                row.append(True)
            elif ch in BLOCKED_CHARS:
                row.append(False)
            else:
                raise MapParseError(f"line {5 + i}, column {j + 1}: unknown character {ch!r}")
        rows.append(row)
    return GridMap(rows)


def _header_int(line: str, key: str, lineno: int) -> int:
    parts = line.strip().split()
    if len(parts) != 2 or parts[0] != key or not parts[1].isdigit():
        raise MapParseError(f"line {lineno}: expected '{key} <N>', got {line.strip()!r}")
    value = int(parts[1])
    if value <= 0:
        raise MapParseError(f"line {lineno}: {key} must be positive")
    return value


def to_movingai(grid: GridMap) -> str:
    """Serialize back to the map format ('.' traversable, '@' blocked)."""
    header = [f"type octile", f"height {grid.height}", f"width {grid.width}", "map"]
    body = ["".join("." if grid.is_traversable(r, c) else "@" for c in range(grid.width))
            for r in range(grid.height)]
    return "\n".join(header + body) + "\n"


def load_map(path) -> GridMap:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_movingai(fh.read())
