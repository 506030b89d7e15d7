import math

import numpy as np
import pytest

from dfscreen.exceptions import DataError, ParameterError
from dfscreen.links import (
    LinkSpec,
    inverse_link,
    link_name,
    parse_link,
    project_response,
    transform_response,
)

IDENTITY = LinkSpec("identity")
LOGIT = LinkSpec("logit")
LOG = LinkSpec("log")
CUBE = LinkSpec("power", alpha=1.0 / 3.0)
FIFTH = LinkSpec("power", alpha=1.0 / 5.0)


class TestLinkSpec:
    def test_power_requires_valid_alpha(self):
        with pytest.raises(ParameterError):
            LinkSpec("power", alpha=0.5)
        with pytest.raises(ParameterError):
            LinkSpec("power")

    def test_alpha_only_for_power(self):
        with pytest.raises(ParameterError):
            LinkSpec("identity", alpha=1.0 / 3.0)

    def test_unknown_kind(self):
        with pytest.raises(ParameterError):
            LinkSpec("probit")

    def test_parse_round_trip(self):
        for text in ("identity", "logit", "log", "power:1/3", "power:1/5"):
            assert link_name(parse_link(text)) == text

    def test_parse_rejects_garbage(self):
        with pytest.raises(ParameterError):
            parse_link("power:1/7")
        with pytest.raises(ParameterError):
            parse_link("cauchit")


class TestProjectResponse:
    def test_logit_zero_at_n100(self):
        assert project_response(0, LOGIT, 100) == pytest.approx(0.1)

    def test_logit_one_at_n100(self):
        assert project_response(1, LOGIT, 100) == pytest.approx(0.9)

    def test_log_nonzero_count_unchanged(self):
        assert project_response(7, LOG, 100) == 7.0

    def test_log_zero_count(self):
        assert project_response(0, LOG, 100) == pytest.approx(0.1)

    def test_identity_passthrough(self):
        assert project_response(-3.5, IDENTITY, 50) == -3.5

    def test_power_passthrough(self):
        assert project_response(-2.0, CUBE, 50) == -2.0

    def test_logit_rejects_non_binary(self):
        with pytest.raises(DataError):
            project_response(0.5, LOGIT, 100)

    def test_logit_rejects_tiny_n(self):
        with pytest.raises(ParameterError):
            project_response(0, LOGIT, 4)

    def test_log_rejects_negative(self):
        with pytest.raises(DataError):
            project_response(-1, LOG, 100)


class TestTransformResponse:
    def test_logit_values(self):
        # sample size 100 drives the boundary projection
        y = np.zeros(100)
        y[1] = 1.0
        tr = transform_response(y, LOGIT)
        assert tr.ystar[0] == pytest.approx(math.log(1 / 9))
        assert tr.ystar[1] == pytest.approx(math.log(9))
        assert not tr.identity_transform

    def test_log_values(self):
        y = np.zeros(100)
        y[1] = 1.0
        tr = transform_response(y, LOG)
        assert tr.ystar[0] == pytest.approx(math.log(0.1))
        assert tr.ystar[1] == pytest.approx(0.0)

    def test_cube_power(self):
        tr = transform_response(np.array([2.0]), CUBE)
        assert tr.ystar == pytest.approx([8.0])

    def test_fifth_power_negative(self):
        tr = transform_response(np.array([-2.0]), FIFTH)
        assert tr.ystar == pytest.approx([-32.0])

    def test_identity_flag(self):
        tr = transform_response(np.array([1.0, -2.0]), IDENTITY)
        assert tr.identity_transform
        assert tr.ystar == pytest.approx([1.0, -2.0])
        for link in (LOGIT, LOG, CUBE, FIFTH):
            y = np.tile([0.0, 1.0], 10) if link in (LOGIT, LOG) else np.array([1.0, 2.0])
            assert not transform_response(y, link).identity_transform

    def test_all_entries_finite(self):
        n = 400
        rng = np.random.default_rng(0)
        cases = [
            (IDENTITY, rng.standard_normal(n)),
            (LOGIT, rng.integers(0, 2, n).astype(float)),
            (LOG, rng.poisson(3.0, n).astype(float)),
            (CUBE, rng.standard_normal(n)),
        ]
        for link, y in cases:
            assert np.isfinite(transform_response(y, link).ystar).all()

    def test_overflowing_power_rejected(self):
        with pytest.raises(DataError, match="finite"):
            transform_response(np.array([1e200, 1.0]), CUBE)


class TestInverseLink:
    def test_logit_at_zero(self):
        assert inverse_link(0.0, LOGIT) == pytest.approx(0.5)

    def test_logit_inverts_example(self):
        assert inverse_link(math.log(9), LOGIT) == pytest.approx(0.9)

    def test_logit_deep_tail_is_safe(self):
        val = inverse_link(-800.0, LOGIT)
        assert 0.0 <= val < 1e-100

    def test_cube_root(self):
        assert inverse_link(8.0, CUBE) == pytest.approx(2.0)

    def test_signed_root(self):
        assert inverse_link(-32.0, FIFTH) == pytest.approx(-2.0)

    def test_log_exp(self):
        assert inverse_link(0.0, LOG) == pytest.approx(1.0)


class TestRoundTripsAndMonotonicity:
    def test_round_trips_over_seeded_inputs(self):
        rng = np.random.default_rng(99)
        n = 1000
        cases = [
            (IDENTITY, rng.standard_normal(n)),
            (LOGIT, (rng.random(n) < 0.5).astype(float)),
            (LOG, rng.poisson(2.0, n).astype(float)),
            (CUBE, rng.standard_normal(n)),
            (FIFTH, rng.standard_normal(n)),
        ]
        for link, y in cases:
            projected = np.array([project_response(v, link, n) for v in y])
            ystar = transform_response(y, link).ystar
            back = inverse_link(ystar, link)
            assert np.allclose(back, projected, rtol=1e-12, atol=1e-300)

    def test_transform_strictly_increasing(self):
        grids = {
            IDENTITY: np.linspace(-5, 5, 101),
            LOGIT: np.array([0.1, 0.2, 0.5, 0.8, 0.9]),  # projected domain
            LOG: np.linspace(0.1, 40, 101),
            CUBE: np.linspace(-3, 3, 101),
            FIFTH: np.linspace(-2, 2, 101),
        }
        transforms = {
            IDENTITY: lambda t: t,
            LOGIT: lambda t: np.log(t / (1 - t)),
            LOG: np.log,
            CUBE: lambda t: t**3,
            FIFTH: lambda t: t**5,
        }
        for link, grid in grids.items():
            vals = transforms[link](grid)
            assert np.all(np.diff(vals) > 0)
