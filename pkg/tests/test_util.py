import numpy as np

from squid_lindblad.util import (
    commutator_anticommutator_super,
    content_hash,
    deep_get,
    dissipator_super,
    double_commutator_super,
    leading_block_indices,
    random_density_matrix,
    sprepost,
    trace_distance,
    trace_row,
    unvec,
    vec,
)


def test_sprepost_acts_on_column_stacked_vectors(rng):
    A, B, rho = (rng.standard_normal((3, 3)) for _ in range(3))
    np.testing.assert_allclose(unvec(sprepost(A, B) @ vec(rho)), A @ rho @ B)


def test_nested_commutator_superoperators(rng):
    A, B, rho = (rng.standard_normal((4, 4)) for _ in range(3))
    expected = A @ (B @ rho - rho @ B) - (B @ rho - rho @ B) @ A
    result = unvec(double_commutator_super(A, B) @ vec(rho))
    np.testing.assert_allclose(result, expected)

    anti = B @ rho + rho @ B
    expected = A @ anti - anti @ A
    np.testing.assert_allclose(
        unvec(commutator_anticommutator_super(A, B) @ vec(rho)), expected
    )


def test_dissipator_preserves_trace(rng):
    L = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    D = dissipator_super(L)
    np.testing.assert_allclose(trace_row(5) @ D, 0, atol=1e-12)


def test_leading_block_indices():
    N, M = 4, 2
    rho = np.arange(N * N).reshape(N, N)
    picked = vec(rho)[leading_block_indices(N, M)]
    assert sorted(picked) == sorted(rho[:M, :M].reshape(-1))


def test_random_density_matrix(rng):
    rho = random_density_matrix(6, rng, rank=2)
    assert abs(np.trace(rho) - 1) < 1e-14
    eig = np.linalg.eigvalsh(rho)
    assert eig.min() > -1e-14
    assert np.sum(eig > 1e-12) == 2


def test_trace_distance_of_orthogonal_states():
    rho = np.diag([1.0, 0.0])
    sigma = np.diag([0.0, 1.0])
    assert trace_distance(rho, sigma) == 1.0
    assert trace_distance(rho, rho) == 0.0


def test_deep_get():
    data = {"provenance": {"N": 40, "steps": [1, 2]}}
    assert deep_get(data, ["provenance", "N"]) == 40
    assert deep_get(data, ["provenance", "steps", 1]) == 2
    assert deep_get(data, ["missing", "N"]) is None


def test_content_hash_ignores_key_order():
    assert content_hash({"a": 1, "b": 2}) == content_hash({"b": 2, "a": 1})
    assert content_hash({"a": 1}) != content_hash({"a": 2})
