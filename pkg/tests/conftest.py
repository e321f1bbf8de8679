import pytest

from stresslab.exactla import GF, QQ

P = 2147483629  # prime just below 2^31


@pytest.fixture(params=["q", "fp"])
def field(request):
    return QQ if request.param == "q" else GF(P)
