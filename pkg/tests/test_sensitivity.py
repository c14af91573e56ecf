import csv
import io
import json
import math

import numpy as np
import pytest

from trialbf.bayes import PriorSpec, Truncation, bayes_factor
from trialbf.effects import LogEffect
from trialbf.errors import ConfigurationError, UnsupportedPointPriorError
from trialbf.export import dumps
from trialbf.sensitivity import GridSpec, grid_clip, grid_eval, grid_max, grid_to_csv, grid_to_dict


def test_headline_grids(ex1, ex2):
    g1 = grid_eval(ex1, GridSpec(math.log(0.5), 0.0, 0.0, 1.0, 201, 201, Truncation.NEGATIVE_ONLY))
    mu, tau, bf = grid_max(g1)
    assert abs(bf - 7.46) <= 0.01
    assert tau == 0.0 and abs(mu - ex1.theta_hat) <= (g1.mu_axis[1] - g1.mu_axis[0])

    g2 = grid_eval(ex2, GridSpec(0.0, math.log(3.0), 0.0, 1.0, 201, 201, Truncation.POSITIVE_ONLY))
    assert abs(grid_max(g2)[2] - 4.31) <= 0.01


def test_default_spec_matches_benefit_side(ex1, ex2):
    s1 = GridSpec.for_effect(ex1)
    assert (s1.mu_min, s1.mu_max, s1.truncation) == (math.log(0.5), 0.0, Truncation.NEGATIVE_ONLY)
    s2 = GridSpec.for_effect(ex2)
    assert (s2.mu_min, s2.mu_max, s2.truncation) == (0.0, math.log(3.0), Truncation.POSITIVE_ONLY)
    assert (s1.n_mu, s1.n_tau, s1.tau_max, s1.clip_floor) == (201, 201, 1.0, 0.01)


def test_null_cell_is_zero(ex2):
    g = grid_eval(ex2, GridSpec(-0.5, 0.5, 0.0, 1.0, 11, 5))
    assert g.log_bf[0, 5] == 0.0 and g.mu_axis[5] == 0.0


def test_infeasible_point_cells_absent(ex1):
    g = grid_eval(ex1, GridSpec.for_effect(ex1, n_mu=21, n_tau=6))
    assert np.isnan(g.log_bf[0, -1])  # tau = 0, mu = 0 under negative_only
    assert not np.isnan(g.log_bf[0, :-1]).any()
    assert not np.isnan(g.log_bf[1:]).any()


def test_all_absent_is_configuration_error():
    e = LogEffect(0.1, 0.2)
    with pytest.raises(ConfigurationError):
        grid_eval(e, GridSpec(-1.0, 0.0, 0.0, 0.0, 5, 2, Truncation.POSITIVE_ONLY))


@pytest.mark.parametrize(
    "kw",
    [dict(mu_min=0.0, mu_max=0.0), dict(mu_min=0, mu_max=1, tau_min=0.5, tau_max=0.1),
     dict(mu_min=0, mu_max=1, tau_min=-1.0), dict(mu_min=0, mu_max=1, n_mu=1),
     dict(mu_min=0, mu_max=1, clip_floor=0.0)],
)
def test_spec_validation(kw):
    with pytest.raises(ConfigurationError):
        GridSpec(**kw)


def test_cells_equal_single_calls(ex1):
    spec = GridSpec.for_effect(ex1, n_mu=101, n_tau=101)
    g = grid_eval(ex1, spec)
    rng = np.random.default_rng(3)
    for _ in range(100):
        i, j = rng.integers(0, 101, size=2)
        try:
            prior = PriorSpec(float(g.mu_axis[j]), float(g.tau_axis[i]), spec.truncation)
        except UnsupportedPointPriorError:
            assert np.isnan(g.log_bf[i, j])
            continue
        assert g.log_bf[i, j] == bayes_factor(ex1, prior).log_bf


def test_parallel_evaluation_is_bit_identical(ex2):
    spec = GridSpec.for_effect(ex2, n_mu=81, n_tau=61)
    serial = grid_eval(ex2, spec)
    for workers in (2, 4, 8):
        par = grid_eval(ex2, spec, workers=workers)
        assert par.log_bf.tobytes() == serial.log_bf.tobytes()
        assert par.max_cell == serial.max_cell


def test_clip_floor():
    e = LogEffect(-0.04082199452025513, 0.020363606446325623)
    spec = GridSpec(math.log(0.7), 0.0, 0.0, 0.5, 3, 2, Truncation.NEGATIVE_ONLY)
    g = grid_eval(e, spec)
    clipped = grid_clip(g)
    assert g.log_bf[0, 0] < -100 and clipped[0, 0] == 0.01
    assert np.isnan(clipped[0, 2])
    present = ~np.isnan(clipped)
    assert (clipped[present] >= 0.01).all()


def test_clip_boundary_and_passthrough():
    e = LogEffect(0.0, 1.0)
    # tau chosen so that the untruncated null-centred BF is exactly 1/2
    g = grid_eval(e, GridSpec(-1e-9, 1e-9, math.sqrt(3.0), math.sqrt(3.0), 2, 2))
    assert grid_clip(g)[0, 0] == pytest.approx(0.5, rel=1e-9)
    floor = float(np.exp(g.log_bf[0, 0]))
    g2 = grid_eval(e, GridSpec(-1e-9, 1e-9, math.sqrt(3.0), math.sqrt(3.0), 2, 2, clip_floor=floor))
    assert grid_clip(g2)[0, 0] == floor


def test_tie_break_prefers_small_tau_then_small_abs_mu():
    e = LogEffect(0.0, 1.0)
    g = grid_eval(e, GridSpec(-1.0, 1.0, 0.0, 1.0, 3, 3))
    # mu = 0 gives log BF 0 at tau = 0; every other cell is lower
    assert (g.max_cell.mu, g.max_cell.tau) == (0.0, 0.0)
    sym = grid_eval(LogEffect(0.0, 1.0), GridSpec(-0.5, 0.5, 0.0, 0.0, 2, 2))
    assert sym.log_bf[0, 0] == sym.log_bf[0, 1]
    assert sym.max_cell.mu == -0.5  # equal |mu|: first in axis order
    assert sym.max_cell.tau == 0.0


def test_max_at_boundary_when_estimate_out_of_range():
    e = LogEffect(0.8, 0.2)
    g = grid_eval(e, GridSpec(-0.5, 0.3, 0.0, 0.0, 17, 2))
    assert g.max_cell.mu == pytest.approx(0.3)


def test_refinement_monotone_and_converges(ex1):
    base = dict(mu_min=math.log(0.5), mu_max=0.0, tau_max=1.0, truncation=Truncation.NEGATIVE_ONLY)
    prev = -math.inf
    for n in (26, 51, 101, 201, 401):
        m = grid_eval(ex1, GridSpec(n_mu=n, n_tau=n, **base)).max_cell.bf
        assert m >= prev
        prev = m
    assert abs(prev - ex1.max_bf) / ex1.max_bf < 1e-3


def test_csv_and_json_exports(ex2):
    g = grid_eval(ex2, GridSpec.for_effect(ex2, n_mu=4, n_tau=3))
    rows = list(csv.DictReader(io.StringIO(grid_to_csv(g))))
    assert len(rows) == 12
    assert list(rows[0]) == ["mu", "tau", "log_bf", "bf_clipped", "mu_ratio"]
    assert rows[0]["log_bf"] == ""  # tau = 0, mu = 0 absent under positive_only
    assert float(rows[1]["log_bf"]) == g.log_bf[0, 1]
    doc = json.loads(dumps(grid_to_dict(g)))
    assert doc["schema_version"] == 1
    assert doc["log_bf"][0][0] is None
    assert doc["max_cell"]["bf"] == g.max_cell.bf
    assert doc["effect"]["summary"]["label"] == "ecpr"
    assert len(doc["mu_axis"]) == 4 and len(doc["tau_axis"]) == 3
