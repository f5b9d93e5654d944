import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from orthash import _backend  # noqa: E402


@pytest.fixture(params=[k.NAME for k in _backend.available()])
def kern(request):
    """Each available kernel backend in turn."""
    return next(k for k in _backend.available() if k.NAME == request.param)
