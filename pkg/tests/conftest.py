import json

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from numradius.generators import GeneratorKind, GeneratorSpec, generate

settings.register_profile(
    "numradius",
    max_examples=25,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("numradius")

NILPOTENT = np.array([[0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def make(kind, n=4, seed=0, **kw):
    return generate(GeneratorSpec(kind=GeneratorKind(kind), n=n, seed=seed, **kw))


@pytest.fixture
def write_matrix(tmp_path):
    def _write(name, A):
        A = np.asarray(A, dtype=complex)
        path = tmp_path / name
        path.write_text(
            json.dumps(
                {
                    "n": A.shape[0],
                    "re": A.real.tolist(),
                    "im": A.imag.tolist(),
                }
            )
        )
        return str(path)

    return _write
