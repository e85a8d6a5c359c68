import numpy as np
import pytest

from heun_racah import build_params, build_representation
from heun_racah.dynamical import DynContext
from heun_racah.heun import build_heun_params

# Reference parameter set used throughout: N=1, beta=5, gamma=1, delta=2,
# where alpha=-2, b=43, d1=d2=-231/8 and the matrices are small integers
# over 20ths (all hand-checkable).
X0 = np.array([[6.95, -1.8], [-3.2, 5.55]], dtype=complex)
Y0 = np.diag([3.75, 8.75]).astype(complex)
Z0 = np.array([[0.0, -9.0], [16.0, 0.0]], dtype=complex)


@pytest.fixture(scope="session")
def p0():
    return build_params(1, 5, 1, 2)


@pytest.fixture(scope="session")
def rep0(p0):
    return build_representation(p0)


@pytest.fixture(scope="session")
def ctx0(rep0):
    return DynContext(rep=rep0, rho=2)


@pytest.fixture(scope="session")
def hp0(p0):
    return build_heun_params(2, 1, 3, p0)
