"""CSV and SVG exports of a prefix of the ordering (columns run left to right, rows downward)."""

from __future__ import annotations

from typing import Sequence

from .vectors import Coord

CSV_HEADER = "rank,i,j"


def path_csv(coords: Sequence[Coord]) -> str:
    lines = [CSV_HEADER]
    lines += [f"{k},{c.i},{c.j}" for k, c in enumerate(coords)]
    return "\n".join(lines) + "\n"


def path_svg(coords: Sequence[Coord], cell: int = 12, margin: int = 20, b: Sequence[int] = ()) -> str:
    """Polyline through the visited cells; dashed guide lines mark the rows b_n."""
    if not coords:
        raise ValueError("empty path")
    max_i = max(c.i for c in coords)
    max_j = max(c.j for c in coords)
    width = 2 * margin + cell * max_j
    height = 2 * margin + cell * max_i

    def xy(c: Coord) -> str:
        return f"{margin + cell * c.j},{margin + cell * c.i}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<!-- readop ordering prefix: {len(coords)} ranks, b={','.join(map(str, b))} -->",
    ]
    for r in b:
        if r <= max_i:
            y = margin + cell * r
            out.append(
                f'<line x1="0" y1="{y}" x2="{width}" y2="{y}" stroke="#999" stroke-dasharray="4,3"/>'
            )
    points = " ".join(xy(c) for c in coords)
    out.append(f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{points}"/>')
    start = coords[0]
    out.append(f'<circle cx="{margin + cell * start.j}" cy="{margin + cell * start.i}" r="3" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
