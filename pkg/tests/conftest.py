import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from effx.dataset import Dataset, DmuRecord, bundled_fixture

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def airports() -> Dataset:
    return bundled_fixture()


def random_dataset(rng: np.random.Generator, n: int, m: int = 2, s: int = 2) -> Dataset:
    """Small synthetic dataset with positive inputs and positive outputs."""
    records = []
    for i in range(n):
        inputs = tuple(float(v) for v in rng.uniform(0.5, 10.0, m))
        outputs = tuple(float(v) for v in rng.uniform(0.5, 10.0, s))
        records.append(DmuRecord(id=f"u{i}", name=f"unit {i}", inputs=inputs, outputs=outputs))
    return Dataset(
        dmus=tuple(records),
        input_names=tuple(f"in{j}" for j in range(m)),
        output_names=tuple(f"out{j}" for j in range(s)),
    )
