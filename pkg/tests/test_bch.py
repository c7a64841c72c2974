import numpy as np
import pytest

from squid_lindblad.bch import (
    BchTermTable,
    bch_coefficient,
    heisenberg_flux_exact,
    truncated_flux_series,
    truncation_error_slope,
)
from squid_lindblad.errors import UnsupportedOrderError
from squid_lindblad.hamiltonian import (
    HamiltonianConfig,
    build_system_hamiltonian,
    sin_operator,
)
from squid_lindblad.operators import build_xp


@pytest.fixture
def squid_h(reference_scales):
    N = 12
    H = build_system_hamiltonian(
        reference_scales, HamiltonianConfig(flux_fraction=0.3), N
    )
    X, P = build_xp(N)
    return H, X, P


@pytest.fixture
def wide_h(reference_scales):
    # f(X) in a truncated basis is only exact far from the top level
    N = 30
    H = build_system_hamiltonian(
        reference_scales, HamiltonianConfig(flux_fraction=0.3, include_squeeze=False), N
    )
    X, _ = build_xp(N)
    return H, X


def test_first_coefficient_is_minus_p(oscillator_scales):
    N = 10
    H = build_system_hamiltonian(oscillator_scales, HamiltonianConfig(), N)
    X, P = build_xp(N)
    A1 = bch_coefficient(1, H, X)
    # -i[H, X] = -P away from the truncation edge
    np.testing.assert_allclose(A1[: N - 2, : N - 2], -P[: N - 2, : N - 2], atol=1e-13)


def test_second_coefficient_matches_series(reference_scales, wide_h):
    H, X = wide_h
    N = X.shape[0]
    S = sin_operator(reference_scales, 0.3, N)
    A2 = bch_coefficient(2, H, X)
    expected = -0.5 * (X + reference_scales.sin_scale * S)
    block = slice(0, 6)
    np.testing.assert_allclose(A2[block, block], expected[block, block], atol=1e-10)


def test_coefficient_order_limits(squid_h):
    H, X, _ = squid_h
    np.testing.assert_array_equal(bch_coefficient(0, H, X), X)
    with pytest.raises(UnsupportedOrderError):
        bch_coefficient(5, H, X)
    with pytest.raises(UnsupportedOrderError):
        BchTermTable.build(5, H, X, None)


def test_weighted_sum_reproduces_truncated_series(reference_scales, wide_h):
    H, X = wide_h
    N = X.shape[0]
    table = BchTermTable.build(2, H, X, reference_scales)
    series = truncated_flux_series(2, reference_scales, 0.3, N)
    block = slice(0, 6)
    np.testing.assert_allclose(
        table.weighted_sum()[block, block], series[block, block], atol=1e-10
    )


def test_truncated_series_orders(reference_scales):
    N = 8
    X, P = build_xp(N)
    np.testing.assert_allclose(
        truncated_flux_series(1, reference_scales, 0.0, N), X - reference_scales.xi * P
    )
    with pytest.raises(UnsupportedOrderError):
        truncated_flux_series(3, reference_scales, 0.0, N)


def test_exact_evolution_is_unitary(squid_h):
    H, X, _ = squid_h
    Xt = heisenberg_flux_exact(0.3, H, X)
    np.testing.assert_allclose(
        np.linalg.eigvalsh(Xt), np.linalg.eigvalsh(X), atol=1e-10
    )


@pytest.mark.parametrize("order, expected", [(1, 2.0), (2, 3.0)])
def test_truncation_error_slope(squid_h, order, expected):
    H, X, _ = squid_h
    assert truncation_error_slope(H, X, order) == pytest.approx(expected, abs=0.1)
