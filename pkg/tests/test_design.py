"""Cross-basis construction and cohort container checks."""

import numpy as np
import pytest

from lagindex.design import (
    CohortData,
    IndexWeights,
    assemble_design,
    build_cross_basis,
    modifier_index,
    time_contraction,
)
from lagindex.splines import evaluate_basis, make_spec
from lagindex.validation import ValidationError

rng = np.random.default_rng(1234)


def _small_cohort(n=20, T=6, L=3, family="gaussian"):
    X = rng.uniform(0.0, 10.0, size=(n, T))
    M = rng.uniform(0.0, 1.0, size=(n, L))
    y = rng.normal(size=n)
    if family == "binomial":
        y = (y > 0).astype(float)
    covs = rng.normal(size=(n, 2))
    return CohortData.assemble(y=y, X=X, M=M, covariates=covs, family=family)


def test_cross_basis_matches_triple_sum_oracle():
    """W theta must equal the explicit sum over basis pairs and weeks."""
    n, T, nu_mod, nu_time = 11, 9, 4, 3
    X = rng.uniform(size=(n, T))
    m = rng.uniform(size=n)
    mod_spec = make_spec(nu_mod, (0.0, 1.0))
    time_spec = make_spec(nu_time, (1.0, float(T)), "quantiles", values=np.arange(1.0, T + 1))
    C = evaluate_basis(time_spec, np.arange(1.0, T + 1)).values
    B = evaluate_basis(mod_spec, m)
    V = time_contraction(X, C)
    design = build_cross_basis(V, B)
    theta = rng.normal(size=nu_mod * nu_time)

    fitted = design.W @ theta
    oracle = np.zeros(n)
    for i in range(n):
        for k in range(nu_mod):
            for j in range(nu_time):
                for t in range(T):
                    oracle[i] += B.values[i, k] * X[i, t] * C[t, j] * theta[k * nu_time + j]
    assert np.max(np.abs(fitted - oracle)) < 1e-12


def test_cross_basis_column_order_time_fastest():
    n, T = 7, 5
    X = rng.uniform(size=(n, T))
    m = rng.uniform(size=n)
    mod_spec = make_spec(3, (0.0, 1.0))
    time_spec = make_spec(3, (1.0, float(T)), "quantiles", values=np.arange(1.0, T + 1))
    C = evaluate_basis(time_spec, np.arange(1.0, T + 1)).values
    B = evaluate_basis(mod_spec, m).values
    V = X @ C
    W = build_cross_basis(V, evaluate_basis(mod_spec, m)).W
    for k in range(3):
        for j in range(3):
            assert np.array_equal(W[:, k * 3 + j], B[:, k] * V[:, j])


def test_assemble_design_stacks_blocks():
    W = rng.normal(size=(8, 6))
    Z = rng.normal(size=(8, 3))
    U = assemble_design(W, Z)
    assert U.shape == (8, 9)
    assert np.array_equal(U[:, :6], W)
    assert np.array_equal(U[:, 6:], Z)


def test_cohort_layout_and_locking():
    data = _small_cohort()
    assert data.Z.shape[1] == 1 + 3 + 2
    assert np.array_equal(data.Z[:, 0], np.ones(20))
    assert np.array_equal(data.Z[:, 1:4], data.M)
    assert not data.y.flags.writeable
    assert not data.X.flags.writeable
    with pytest.raises(ValueError):
        data.X[0, 0] = 99.0


def test_cohort_rejects_bad_inputs():
    X = rng.uniform(size=(10, 4))
    M = rng.uniform(size=(10, 2))
    y = rng.normal(size=10)
    with pytest.raises(ValidationError):
        CohortData.assemble(y=y, X=X, M=M + 2.0, family="gaussian")  # outside [0, 1]
    with pytest.raises(ValidationError):
        CohortData.assemble(y=y[:9], X=X, M=M, family="gaussian")
    with pytest.raises(ValidationError):
        CohortData.assemble(y=y, X=X, M=M, family="binomial")  # not 0/1
    with pytest.raises(ValidationError):
        CohortData.assemble(y=y, X=X, M=M, family="poisson")


def test_modifier_index_validates_simplex():
    M = rng.uniform(size=(15, 3))
    m = modifier_index(M, np.array([0.2, 0.3, 0.5]))
    assert m.shape == (15,)
    assert np.all((m >= 0.0) & (m <= 1.0))
    with pytest.raises(ValidationError):
        modifier_index(M, np.array([0.5, 0.6, 0.1]))
    with pytest.raises(ValidationError):
        modifier_index(M, np.array([-0.1, 0.6, 0.5]))
    with pytest.raises(ValidationError):
        modifier_index(M, np.array([0.5, 0.5]))


def test_index_weights_from_unnormalized():
    w = IndexWeights.from_unnormalized(np.array([2.0, 0.0, 2.0]))
    assert np.allclose(w.rho, [0.5, 0.0, 0.5])
    assert np.array_equal(w.eta, [1.0, 0.0, 1.0])
    with pytest.raises(ValidationError):
        IndexWeights.from_unnormalized(np.zeros(3))
    with pytest.raises(ValidationError):
        IndexWeights.from_unnormalized(np.array([1.0, -0.5]))
