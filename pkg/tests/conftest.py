import numpy as np
import pytest

from subweibull import RngStream, TailParams, sample_gaussian, sample_uniform, sample_weibull

N_LARGE = 100_000


@pytest.fixture(scope="session")
def exp_sample():
    return sample_weibull(N_LARGE, TailParams.from_scale(1.0), RngStream(2024, 0))


@pytest.fixture(scope="session")
def gauss_sample():
    return sample_gaussian(N_LARGE, 0.0, 1.0, RngStream(2024, 1))


@pytest.fixture(scope="session")
def uniform_sample():
    return sample_uniform(N_LARGE, 0.0, 1.0, RngStream(2024, 2))


def weibull_grid(theta: float, n: int = 1000, lam: float = 1.0) -> np.ndarray:
    """Exact quantiles q(1 - i/n), i = 1..n (the last one is q(0) = 0)."""
    from subweibull import weibull_quantile

    i = np.arange(1, n + 1)
    return weibull_quantile(1.0 - i / n, TailParams.from_scale(theta, lam))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
