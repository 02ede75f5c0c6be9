import pathlib

import pytest
from hypothesis import settings

from rigidweb import kernel
from rigidweb.linalg import Subspace

FIXTURES = pathlib.Path(__file__).resolve().parents[1] / "fixtures"

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

try:
    from rigidweb import _kernel  # noqa: F401

    BACKENDS = ["python", "cython"]
except ImportError:
    BACKENDS = ["python"]


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = kernel.set_backend(request.param)
    yield request.param
    kernel.set_backend(prev)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def span(n, *rows):
    return Subspace(n, [list(r) for r in rows])
