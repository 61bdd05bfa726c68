"""Bit rasters of interval-map orbits in plain PBM (P1) format.

Each orbit row is the iterate's digit string aligned at the binary point:
column j holds the digit worth 2**-(j+1), rows run top-down in step order.
Rows are right-padded with zeros to the widest iterate.  Because digit
strings always end in 1, padding is unambiguous and parsing can strip it
back off.
"""

from __future__ import annotations

__all__ = ["orbit_rows", "parse_pbm", "render_pbm"]


def orbit_rows(iterates: list) -> list[str]:
    """Digit strings for a list of interval-map iterates, top-down."""
    return [y.to_bits() for y in iterates]


def render_pbm(rows: list[str]) -> str:
    """Serialize digit-string rows as a plain PBM (P1) image.

    Width is the longest row; shorter rows are right-padded with zeros.
    """
    if not rows:
        raise ValueError("render_pbm needs at least one row")
    for row in rows:
        if not row or any(c not in "01" for c in row):
            raise ValueError(f"rows must be nonempty bit strings: {row!r}")
    width = max(len(row) for row in rows)
    lines = [f"P1\n{width} {len(rows)}"]
    for row in rows:
        padded = row.ljust(width, "0")
        lines.append(" ".join(padded))
    return "\n".join(lines) + "\n"


def parse_pbm(text: str) -> list[str]:
    """Invert :func:`render_pbm`: recover the unpadded digit strings.

    Trailing zeros are padding by construction (every stored row ends in 1),
    so stripping them restores the original rows exactly.
    """
    tokens = text.split()
    if len(tokens) < 3 or tokens[0] != "P1":
        raise ValueError("not a plain PBM (P1) image")
    try:
        width, height = int(tokens[1]), int(tokens[2])
    except ValueError as exc:
        raise ValueError("malformed PBM dimensions") from exc
    bits = tokens[3:]
    if len(bits) != width * height:
        raise ValueError(
            f"expected {width * height} pixels for {width}x{height}, got {len(bits)}"
        )
    if any(b not in "01" for b in bits):
        raise ValueError("PBM pixels must be 0 or 1")
    rows = []
    for r in range(height):
        padded = "".join(bits[r * width : (r + 1) * width])
        row = padded.rstrip("0")
        if not row:
            raise ValueError(f"row {r} is all zeros, not an orbit row")
        rows.append(row)
    return rows
