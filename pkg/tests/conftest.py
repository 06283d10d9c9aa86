import pytest

from eac.instance import builtin_instance
from eac.multiquad import MultiQuadElem
from eac.variety import EllipticFactor, ExactSubspace, ProductVariety
from eac.weierstrass import ProductEvaluator


def factor_sqrt(d: int) -> EllipticFactor:
    return EllipticFactor(0, MultiQuadElem.sqrt_of(d))


@pytest.fixture(scope="session")
def flagship():
    return builtin_instance("diag-prod-one")


@pytest.fixture(scope="session")
def A2(flagship):
    return flagship.A


@pytest.fixture(scope="session")
def pe2(flagship):
    # shared so invariants and term counts are computed once per session
    return ProductEvaluator(flagship.A)


@pytest.fixture(scope="session")
def A1():
    return ProductVariety((factor_sqrt(3),), pairwise_nonisogenous=True, no_cm=True)


@pytest.fixture(scope="session")
def A3():
    return ProductVariety(tuple(factor_sqrt(d) for d in (2, 3, 5)),
                          pairwise_nonisogenous=True, no_cm=True)


@pytest.fixture(scope="session")
def diagonal_line():
    return ExactSubspace.complex_span([[1, 1]], 2)
