"""Compare the two refactoring methods on random diagram pairs.

Reports success rate, sequence lengths, runtime and the path-independence gap.

    python3 scripts/refactor_benchmark.py --pairs 300 --model ising --seed 1
"""
import argparse
import random
import statistics
import time

import numpy as np

from modfunctor import CurveDiagram, StandardSurface, builtin, dim
from modfunctor.curves import REFACTOR_METHODS, apply_moves, equal, induced_unitary, refactor


def random_word(strands, length, rng):
    return tuple((k, rng.randint(1, strands - 1) if k == "s" else rng.randint(1, strands), rng.choice((1, -1)))
                 for k in rng.choices("sst", k=length))


def random_pair(model, rng, max_n, max_len):
    n = rng.randint(1, max_n)
    while True:
        interior = tuple(rng.randrange(model.size) for _ in range(n))
        surface = StandardSurface(interior, rng.randrange(model.size))
        if dim(model, surface):
            break
    make = lambda: CurveDiagram(surface, random_word(n + 1, rng.randint(0, max_len), rng), rng.randrange(n + 1))
    return make(), make()


def phase_gap(a, b):
    k = np.vdot(a, b)
    phase = k / abs(k) if abs(k) > 1e-12 else 1
    return float(np.abs(a * phase - b).max())


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", type=int, default=300)
    ap.add_argument("--model", default="fibonacci")
    ap.add_argument("--max-n", type=int, default=5)
    ap.add_argument("--max-len", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    model, rng = builtin(args.model), random.Random(args.seed)
    pairs = [random_pair(model, rng, args.max_n, args.max_len) for _ in range(args.pairs)]
    seqs = {}
    for method in REFACTOR_METHODS:
        t0 = time.perf_counter()
        seqs[method] = [refactor(f, g, method) for f, g in pairs]
        elapsed = time.perf_counter() - t0
        ok = sum(equal(apply_moves(f, s), g) for (f, g), s in zip(pairs, seqs[method]))
        lengths = [len(s) for s in seqs[method]]
        print(f"{method:9s} reached {ok}/{len(pairs)}  mean len {statistics.mean(lengths):6.2f}  "
              f"max len {max(lengths):3d}  {elapsed * 1e3 / len(pairs):.2f} ms/pair")

    gaps = [phase_gap(induced_unitary(model, f, g, a).matrix, induced_unitary(model, f, g, b).matrix)
            for (f, g), a, b in zip(pairs, *seqs.values())]
    print(f"path independence: max gap {max(gaps):.1e} over {len(gaps)} pairs")


if __name__ == "__main__":
    main()
