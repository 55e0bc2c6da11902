"""Spectra and relation errors of the braid representation for each built-in model.

    python3 scripts/braid_spectra.py [--max-n 6]
"""
import argparse
import itertools

import numpy as np

from modfunctor import StandardSurface, builtin, compile_word, dim
from modfunctor.model import BUILTIN_NAMES


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    print(f"{'model':10s} {'n':>2s} {'dim':>4s} {'artin err':>10s}  eigenphases of s1 (units of pi)")
    for name in BUILTIN_NAMES:
        m = builtin(name)
        nontrivial = [a for a in range(m.size) if a != m.vacuum] or [m.vacuum]
        for n in range(3, args.max_n + 1):
            s = next((StandardSurface((a,) * n, b) for a, b in itertools.product(nontrivial, range(m.size))
                      if dim(m, StandardSurface((a,) * n, b))), None)
            if s is None:
                continue
            lhs = compile_word(m, s, "s1 s2 s1").matrix
            rhs = compile_word(m, s, "s2 s1 s2").matrix
            phases = np.angle(np.linalg.eigvals(compile_word(m, s, "s1").matrix)) / np.pi
            shown = " ".join(f"{p:+.3f}" for p in sorted(set(np.round(phases, 6))))
            print(f"{name:10s} {n:2d} {dim(m, s):4d} {np.abs(lhs - rhs).max():10.1e}  {shown}")


if __name__ == "__main__":
    main()
