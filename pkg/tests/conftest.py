import importlib.util
import random
import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

from modfunctor.fusion import StandardSurface, dim  # noqa: E402
from modfunctor.model import BUILTIN_NAMES, builtin  # noqa: E402


@pytest.fixture(scope="session")
def solver():
    """The one-off pentagon/hexagon solver script, loaded as a module."""
    spec = importlib.util.spec_from_file_location("solve_models", ROOT / "scripts" / "solve_models.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


@pytest.fixture(scope="session", params=BUILTIN_NAMES)
def any_model(request):
    return builtin(request.param)


@pytest.fixture(scope="session")
def fib():
    return builtin("fibonacci")


@pytest.fixture(scope="session")
def ising():
    return builtin("ising")


def phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - c b| for the unit c aligning the largest entry of b."""
    if a.shape != b.shape:
        return float("inf")
    if b.size == 0:
        return 0.0
    k = np.unravel_index(np.abs(b).argmax(), b.shape)
    if abs(b[k]) < 1e-12:
        return float(np.abs(a).max())
    c = a[k] / b[k]
    return float(max(abs(abs(c) - 1), np.abs(a - c * b).max()))


def random_surface(model, n, rng: random.Random, nonzero=True):
    while True:
        s = StandardSurface(tuple(rng.randrange(model.size) for _ in range(n)), rng.randrange(model.size))
        if not nonzero or dim(model, s) > 0:
            return s


def random_word(n_strands, length, rng: random.Random, twists=True):
    word = []
    for _ in range(length):
        if n_strands >= 2 and (not twists or rng.random() < 0.75):
            word.append(("s", rng.randint(1, n_strands - 1), rng.choice((1, -1))))
        else:
            word.append(("t", rng.randint(1, n_strands), rng.choice((1, -1))))
    return tuple(word)
