"""Export the first ranks of the ordering as SVG and CSV (the picture of the snake path)."""

from __future__ import annotations

import argparse
from pathlib import Path

from readop.figure import path_csv, path_svg
from readop.ordering import path_prefix, validate_b


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--b", default="6,30", help="comma-separated rows b_n")
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", type=Path, default=Path("figure1"))
    args = p.parse_args(argv)
    b = validate_b([int(t) for t in args.b.split(",")])
    coords = path_prefix(args.count, b)
    args.out.with_suffix(".svg").write_text(path_svg(coords, b=b), encoding="utf-8")
    args.out.with_suffix(".csv").write_text(path_csv(coords), encoding="utf-8")
    turns = [k for k in range(1, len(coords) - 1)
             if (coords[k].i - coords[k - 1].i, coords[k].j - coords[k - 1].j)
             != (coords[k + 1].i - coords[k].i, coords[k + 1].j - coords[k].j)]
    print(f"{len(coords)} ranks, {len(turns)} turns; first turns at ranks {turns[:12]}")
    print(f"wrote {args.out.with_suffix('.svg')} and {args.out.with_suffix('.csv')}")


if __name__ == "__main__":
    main()
