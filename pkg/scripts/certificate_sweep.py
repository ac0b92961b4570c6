"""Cyclicity certificates for many random head vectors; prints the distribution of final norms.

Every certificate is evaluated exactly on the whole input vector.  Vectors the
constructed stages cannot handle are counted as unresolved, never as passes.
"""

from __future__ import annotations

import argparse
from collections import Counter
from pathlib import Path

from readop import params_io
from readop.cli import packaged_params, random_head_vector
from readop.cyclicity import cyclic_certificate
from readop.errors import BoundViolated, Unresolved


def main(argv=None) -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--params", type=Path)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--N", type=int, default=0)
    p.add_argument("--support-below", type=int)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args(argv)
    text = args.params.read_text() if args.params else packaged_params("strict")
    model = params_io.loads(text).model
    below = args.support_below or model.stages[0].pos_a
    outcomes: Counter = Counter()
    worst = None
    degrees = Counter()
    for s in range(args.seed, args.seed + args.count):
        x = random_head_vector(model, s, below)
        try:
            rep = cyclic_certificate(x, args.N, model)
        except Unresolved:
            outcomes["unresolved"] += 1
            continue
        except BoundViolated:
            outcomes["bound violated"] += 1
            continue
        outcomes["pass" if rep.passed else "fail"] += 1
        degrees[rep.certificate.degree] += 1
        if worst is None or rep.final_norm > worst[1]:
            worst = (s, rep.final_norm)
    print(f"N={args.N} support below rank {below}: {dict(sorted(outcomes.items()))}")
    if worst:
        print(f"largest final norm {worst[1]} (= {float(worst[1].as_fraction()):.6g}) at seed {worst[0]}")
    print("polynomial degrees:", dict(sorted(degrees.items())))


if __name__ == "__main__":
    main()
