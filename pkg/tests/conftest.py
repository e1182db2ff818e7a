import pytest

from handlepsc.profile import HALF_PI, Variant, make_profile
from handlepsc.stepfn import build_step

REF_T = 10.0
REF_THETA0 = 0.8
REF_R0 = 0.25
REF_EPS1 = (HALF_PI - REF_THETA0) / 100.0
REF_R = 20.0


@pytest.fixture(scope="session")
def step():
    return build_step()


@pytest.fixture(scope="session")
def step_1024():
    return build_step(1024)


@pytest.fixture(scope="session")
def reference_profile(step):
    return make_profile(Variant.CLASSIC_R0, REF_R0, REF_T, REF_THETA0,
                        REF_EPS1, step)
