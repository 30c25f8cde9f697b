import logging

import pytest

from causalabs.modelio import fixture_path, load_abstraction_file, load_model_file


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logger = logging.getLogger('causalabs')
    for handler in list(logger.handlers):
        if getattr(handler, '_causalabs', False):
            logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture(scope='session')
def model_m():
    return load_model_file(fixture_path('model_M.json'))


@pytest.fixture(scope='session')
def model_m_prime():
    return load_model_file(fixture_path('model_Mprime.json'))


@pytest.fixture(scope='session')
def model_m_dprime():
    return load_model_file(fixture_path('model_Mdprime.json'))


@pytest.fixture(scope='session')
def model_m_tprime():
    return load_model_file(fixture_path('model_Mtprime.json'))


@pytest.fixture(scope='session')
def model_singleton():
    return load_model_file(fixture_path('model_Ms.json'))


@pytest.fixture
def alpha():
    return load_abstraction_file(fixture_path('abs_alpha.json'))


@pytest.fixture
def beta():
    return load_abstraction_file(fixture_path('abs_beta.json'))


@pytest.fixture
def gamma():
    return load_abstraction_file(fixture_path('abs_gamma.json'))


@pytest.fixture
def alpha_dprime():
    return load_abstraction_file(fixture_path('abs_alpha_dprime.json'))


@pytest.fixture
def alpha_tprime():
    return load_abstraction_file(fixture_path('abs_alpha_tprime.json'))
