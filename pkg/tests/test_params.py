import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from insectvision.params import (
    LATERAL_KERNEL, Params, ParamsError, dump_params, gaussian_kernel, load_params,
    load_params_file,
)


def test_empty_document_gives_published_defaults():
    p = load_params("")
    assert p.tau2 == 100.0
    assert p.w1 == 0.3
    assert p.w2 == 0.6
    assert p.sigma1 == 15.0
    assert p.n_sp == 6
    assert p.n_t == 4
    assert p.tau1 == 1.0
    assert p.tau3 == 10.0
    assert p.g_v == 1.0
    assert p.n_i == 2
    assert p.theta3 == 0.0
    assert (p.t_sp_dsn, p.t_sp_lgmd) == (0.2, 0.7)
    assert (p.frame_w, p.frame_h, p.fps, p.fov_deg) == (99, 72, 30.0, 70.0)
    assert (p.arena_w, p.arena_h, p.robot_diameter, p.max_speed) == (70.0, 55.0, 4.0, 35.0)


def test_turning_gain_default_is_the_tuned_value():
    # lowered from 10: with rim-speed wheel units the larger gain saturates the
    # motors on any DSN response and robots spin in place
    assert Params().g_w == 1.0
    assert Params(g_w=10.0).g_w == 10.0


def test_tau1_not_below_tau2_is_rejected():
    with pytest.raises(ParamsError, match="tau1"):
        load_params("tau1=200")


def test_pass_through_keys():
    p = load_params("d=3\nn_c=3")
    assert (p.d, p.n_c) == (3, 3)
    assert p.replace(d=2, n_c=2) == Params()


def test_comments_and_blank_lines():
    p = load_params("# header\n\n  k_sp = 4   # inline\n")
    assert p.k_sp == 4.0


@pytest.mark.parametrize("text, key", [
    ("bogus=1", "bogus"),
    ("tau_s=5", "tau_s"),
    ("tau_s=abc", "tau_s"),
    ("k_sig=0.9", "k_sig"),
    ("d=5", "d"),
    ("t_sp_dsn=0.8", "t_sp_dsn"),
    ("avoid_turn_radians=3", "avoid_turn_radians"),
    ("lum_robot=250", "lum_robot"),
    ("k_sp=2\nk_sp=3", "k_sp"),
])
def test_errors_name_the_key(text, key):
    with pytest.raises(ParamsError, match=key):
        load_params(text)


def test_missing_equals_is_a_parse_error():
    with pytest.raises(ParamsError, match="line 1"):
        load_params("tau_s 30")


def test_kernel_weight_range_enforced():
    bad = ((0.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 0.0))
    with pytest.raises(ParamsError, match="w_e"):
        Params(w_e=bad)


def test_kernel_sizes_must_follow_support_rule():
    with pytest.raises(ParamsError, match="w_i"):
        Params(w_i=gaussian_kernel(5, 10.0))


def test_default_kernels():
    p = Params()
    assert abs(np.sum(p.w_e) - 1.0) < 1e-12
    assert abs(np.sum(p.w_i) - 1.0) < 1e-12
    assert np.asarray(p.w_e).shape == (3, 3)
    assert np.asarray(p.w_i).shape == (7, 7)
    wl = np.asarray(LATERAL_KERNEL)
    assert wl[1, 1] == 0.0
    assert wl[0, 1] == wl[1, 0] == 0.25
    assert wl[0, 0] == 0.125


def test_a_coeffs():
    p = Params()
    expected = [1.0 / (1.0 + math.e ** i) for i in (1, 2)]
    np.testing.assert_allclose(p.a_coeffs, expected, rtol=0, atol=1e-15)
    assert abs(p.a_coeffs[0] - 0.26894) < 1e-5


def test_derived_quantities():
    p = Params()
    assert p.n_pixels == 99 * 72
    assert p.robot_radius == 2.0
    assert abs(p.dt_ms - 1000.0 / 30.0) < 1e-12
    # half image width over tan(half fov)
    assert abs(p.focal_px - 49.5 / math.tan(math.radians(35.0))) < 1e-12


def test_params_are_frozen():
    p = Params()
    with pytest.raises(Exception):
        p.tau_s = 50.0  # type: ignore[misc]


_valid = st.fixed_dictionaries({
    "tau_s": st.floats(10.0, 200.0),
    "d": st.integers(2, 4),
    "n_c": st.integers(2, 4),
    "k_sig": st.floats(0.1, 0.6),
    "k_sp": st.floats(1.0, 6.0),
    "theta1_lgmd1": st.floats(0.0, 1.0),
    "sigma_i": st.floats(1.0, 50.0),
    "rng_seed": st.integers(0, 2**32),
})


@given(_valid)
def test_dump_load_round_trip(values):
    sigma = values.pop("sigma_i")
    p = Params(w_i=gaussian_kernel(7, sigma), **values) if _kernel_ok(sigma) else Params(**values)
    assert load_params(dump_params(p)) == p
    assert abs(np.sum(p.w_i) - 1.0) < 1e-9
    assert abs(np.sum(p.w_e) - 1.0) < 1e-9


def _kernel_ok(sigma: float) -> bool:
    k = np.asarray(gaussian_kernel(7, sigma))
    return k.min() >= 1 / 128 and k.max() <= 1 / 4


def test_load_params_file_with_overrides(tmp_path):
    path = tmp_path / "cfg.txt"
    path.write_text("tau_s=50\n")
    p = load_params_file(path, rng_seed=9)
    assert (p.tau_s, p.rng_seed) == (50.0, 9)
