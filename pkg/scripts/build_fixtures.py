"""Regenerate the packaged parameter files src/readop/data/{strict,toy}.params.

The strict search (stages 0 and 1) takes well under a minute; the D estimates
dominate the run time.  Output is deterministic for fixed seeds.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from readop import params_io
from readop.stages import SamplerConfig, build_strict, toy_model

DATA = Path(__file__).resolve().parents[1] / "src" / "readop" / "data"


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--stages", type=int, default=2)
    p.add_argument("--seed", type=int, default=1729)
    p.add_argument("--mixtures0", type=int, default=2000, help="two-to-four-term mixtures sampled from K_0")
    p.add_argument("--mixtures", type=int, default=400, help="mixtures sampled for later stages")
    p.add_argument("--out", type=Path, default=DATA)
    args = p.parse_args(argv)

    t0 = time.time()
    samplers = [SamplerConfig(seed=args.seed, mixtures=args.mixtures0)]
    samplers += [SamplerConfig(seed=args.seed, mixtures=args.mixtures)] * (args.stages - 1)
    model, reports = build_strict(
        args.stages, sampler=samplers, progress=lambda m: print(f"[{time.time() - t0:7.1f}s] {m}", flush=True)
    )
    pf = params_io.ParameterFile(model, dict(enumerate(reports)), args.seed)
    args.out.mkdir(parents=True, exist_ok=True)
    params_io.save(pf, args.out / "strict.params")
    params_io.save(params_io.ParameterFile(toy_model(), sampler_seed=args.seed), args.out / "toy.params")
    for name in ("strict", "toy"):
        path = args.out / f"{name}.params"
        print(f"{path}  sha256={params_io.file_hash(path)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
