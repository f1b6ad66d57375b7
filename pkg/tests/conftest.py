import numpy as np
import pytest

from l1pursuit import BpInstance, GenSpec, generate


@pytest.fixture
def toy_instance() -> BpInstance:
    """min |x1| + |x2| s.t. x1 + 2 x2 = 2; unique optimum (0, 1), value 1."""
    return BpInstance(A=np.array([[1.0, 2.0]]), b=np.array([2.0]), meta={"label": "toy"})


def small_gen_specs(count: int, base_seed: int = 1000):
    """Seeded desk-scale generation specs with n <= 10 (enumeration-oracle range)."""
    specs = []
    for k in range(count):
        rng = np.random.default_rng(base_seed + k)
        n = int(rng.integers(4, 11))
        m = int(rng.integers(2, max(3, n - 1)))
        s = int(rng.integers(1, max(2, min(m, 3) + 1)))
        specs.append(GenSpec(m=m, n=n, s=s, dynrange=1.0, seed=2 * base_seed + k))
    return specs


def small_instances(count: int, base_seed: int = 1000):
    return [generate(spec) for spec in small_gen_specs(count, base_seed)]
