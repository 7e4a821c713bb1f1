"""Natural cubic spline basis: knot placement, span, boundary behavior."""

import numpy as np
import pytest

from lagindex.splines import BasisEvaluator, SplineSpec, evaluate_basis, make_spec
from lagindex.validation import ValidationError


def test_equally_spaced_knots_df5_unit_interval():
    spec = make_spec(5, (0.0, 1.0), "equally_spaced")
    assert spec.interior_knots == (0.25, 0.5, 0.75)


def test_quantile_knots_on_week_grid():
    weeks = np.arange(1.0, 38.0)
    assert make_spec(3, (1.0, 37.0), "quantiles", values=weeks).interior_knots == (19.0,)
    assert make_spec(5, (1.0, 37.0), "quantiles", values=weeks).interior_knots == (10.0, 19.0, 28.0)
    assert make_spec(4, (1.0, 37.0), "quantiles", values=weeks).interior_knots == (13.0, 25.0)


def test_low_df_has_no_interior_knots():
    assert make_spec(1, (0.0, 1.0)).interior_knots == ()
    assert make_spec(2, (0.0, 1.0)).interior_knots == ()
    b = evaluate_basis(make_spec(1, (0.0, 1.0)), [0.1, 0.9]).values
    assert np.array_equal(b, np.ones((2, 1)))


def test_second_column_is_affine_in_x():
    spec = make_spec(4, (2.0, 8.0), "equally_spaced")
    x = np.linspace(0.0, 10.0, 23)
    b = evaluate_basis(spec, x).values
    # scaled to the boundary window: 0 at lo, 1 at hi
    expected = (x - 2.0) / 6.0
    assert np.allclose(b[:, 1], expected, atol=1e-14)


def test_constants_lie_in_the_span():
    spec = make_spec(5, (0.0, 1.0), "equally_spaced")
    x = np.linspace(0.0, 1.0, 41)
    b = evaluate_basis(spec, x).values
    coef, *_ = np.linalg.lstsq(b, np.ones_like(x), rcond=None)
    assert np.max(np.abs(b @ coef - 1.0)) < 1e-10


def test_natural_tails_are_linear():
    """Beyond both boundary knots every basis column must have zero curvature."""
    spec = make_spec(6, (0.0, 1.0), "equally_spaced")
    h = 0.05
    for tail in (np.array([1.2, 1.2 + h, 1.2 + 2 * h]), np.array([-0.7, -0.7 + h, -0.7 + 2 * h])):
        b = evaluate_basis(spec, tail).values
        second_diff = b[0] - 2.0 * b[1] + b[2]
        assert np.max(np.abs(second_diff)) < 1e-5


def test_cubic_columns_continuous_at_knots():
    spec = make_spec(5, (0.0, 1.0), "equally_spaced")
    for knot in spec.interior_knots:
        left = evaluate_basis(spec, [knot - 1e-9]).values
        right = evaluate_basis(spec, [knot + 1e-9]).values
        assert np.allclose(left, right, atol=1e-7)


def test_evaluator_matches_free_function_and_is_deterministic():
    spec = make_spec(5, (1.0, 37.0), "quantiles", values=np.arange(1.0, 38.0))
    x = np.random.default_rng(0).uniform(1.0, 37.0, size=50)
    ev = BasisEvaluator(spec)
    assert np.array_equal(ev(x), evaluate_basis(spec, x).values)
    assert np.array_equal(ev(x), ev(x))


def test_rows_concatenate_consistently():
    spec = make_spec(4, (0.0, 1.0))
    x = np.linspace(0.0, 1.0, 12)
    whole = evaluate_basis(spec, x).values
    parts = np.vstack([evaluate_basis(spec, x[:5]).values, evaluate_basis(spec, x[5:]).values])
    assert np.array_equal(whole, parts)


def test_spec_validation():
    with pytest.raises(ValidationError):
        make_spec(0, (0.0, 1.0))
    with pytest.raises(ValidationError):
        make_spec(3, (1.0, 1.0))
    with pytest.raises(ValidationError):
        make_spec(3, (2.0, 1.0))
    with pytest.raises(ValidationError):
        SplineSpec(df=5, boundary=(0.0, 1.0), interior_knots=(0.5,))  # needs df-2 knots
    with pytest.raises(ValidationError):
        SplineSpec(df=4, boundary=(0.0, 1.0), interior_knots=(0.7, 0.3))
    with pytest.raises(ValidationError):
        SplineSpec(df=4, boundary=(0.0, 1.0), interior_knots=(0.0, 0.5))  # on the boundary


def test_quantile_ties_rejected():
    with pytest.raises(ValidationError):
        make_spec(5, (0.0, 1.0), "quantiles", values=np.ones(40))


def test_non_finite_points_rejected():
    spec = make_spec(3, (0.0, 1.0))
    with pytest.raises(ValidationError):
        evaluate_basis(spec, [0.1, np.nan])
