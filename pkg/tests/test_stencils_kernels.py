import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qshock import _kernels
from qshock.stencils import gradient, second_derivative, uniform_spacing

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("order,degree", [(2, 2), (4, 4)])
def test_gradient_exact_on_polynomials(order, degree):
    x = np.linspace(-1.3, 2.1, 40)
    h = x[1] - x[0]
    for k in range(degree + 1):
        exact = k * x ** max(k - 1, 0)
        assert np.allclose(gradient(x**k, h, order=order), exact, atol=1e-11)


def test_gradient_convergence_order():
    errs = {2: [], 4: []}
    for n in (101, 201, 401):
        x = np.linspace(0, 2, n)
        h = x[1] - x[0]
        for order in errs:
            errs[order].append(np.max(np.abs(gradient(np.sin(x), h, order) - np.cos(x))))
    for order, e in errs.items():
        rates = np.log2(np.array(e[:-1]) / np.array(e[1:]))
        assert np.all(np.abs(rates - order) < 0.3)


def test_second_derivative_cubic_exact():
    x = np.linspace(0, 1, 30)
    h = x[1] - x[0]
    assert np.allclose(second_derivative(x**3, h), 6 * x, atol=1e-9)


def test_uniform_spacing_rejects_jitter():
    x = np.linspace(0, 1, 20)
    assert uniform_spacing(x) == pytest.approx(1 / 19)
    x[5] += 1e-9
    with pytest.raises(ValueError):
        uniform_spacing(x)


def brute_earliest(b, s, t_max):
    best = (np.inf, -1, -1)
    for i, j in itertools.combinations(range(len(b)), 2):
        if s[i] == s[j]:
            continue
        with np.errstate(over="ignore"):
            t = (b[j] - b[i]) / (s[i] - s[j])
        if 0 < t <= t_max and t < best[0]:
            best = (t, i, j)
    return best


lines = st.integers(2, 40).flatmap(
    lambda n: st.tuples(
        arrays(np.float64, n, elements=st.floats(-10, 10)),
        arrays(np.float64, n, elements=st.floats(-5, 5)),
    )
)


@given(lines, st.floats(0.1, 100))
@settings(max_examples=100)
def test_numpy_crossing_matches_brute_force(bs, t_max):
    b, s = bs
    t, i, j = _kernels.earliest_crossing_numpy(b, s, t_max)
    tb, _, _ = brute_earliest(b, s, t_max)
    assert t == tb
    if np.isfinite(t):
        assert i < j
        with np.errstate(over="ignore"):
            assert (b[j] - b[i]) / (s[i] - s[j]) == t


@needs_numba
@given(lines, st.floats(0.1, 100))
@settings(max_examples=100, deadline=None)
def test_backends_agree_on_crossing(bs, t_max):
    b, s = bs
    assert _kernels.earliest_crossing_numba(b, s, t_max)[0] == _kernels.earliest_crossing_numpy(b, s, t_max)[0]


def test_crossing_skips_parallel_and_coincident():
    b = np.array([0.0, 1.0, 0.0])
    s = np.array([1.0, 1.0, 1.0])
    assert _kernels.earliest_crossing(b, s, 10.0)[0] == np.inf


def test_crossing_chunking_large_set():
    rng = np.random.default_rng(3)
    b = rng.normal(size=2500)
    s = rng.normal(size=2500)
    ref = _kernels.earliest_crossing_numpy(b, s, 1e-3)
    assert ref[0] <= 1e-3
    assert _kernels.earliest_crossing(b, s, 1e-3)[0] == ref[0]


@pytest.mark.parametrize("impl", ["numpy", "numba"])
def test_unwrap_recovers_smooth_phase(impl):
    if impl == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    fn = getattr(_kernels, f"unwrap_from_{impl}")
    x = np.linspace(-5, 5, 501)
    true = 3.0 * x + 0.4 * x**2 + 1.0
    wrapped = np.angle(np.exp(1j * true))
    start = 250
    out, bad = fn(wrapped, start, 0.9 * np.pi)
    assert bad == -1
    assert np.allclose(out - out[start], true - true[start], atol=1e-10)


@pytest.mark.parametrize("impl", ["numpy", "numba"])
def test_unwrap_flags_large_jump(impl):
    if impl == "numba" and not _kernels.HAVE_NUMBA:
        pytest.skip("numba not installed")
    fn = getattr(_kernels, f"unwrap_from_{impl}")
    phase = np.zeros(20)
    phase[12:] = 2.95
    _, bad = fn(phase, 3, 0.9 * np.pi)
    assert bad == 11


@needs_numba
@given(arrays(np.float64, st.integers(2, 200), elements=st.floats(-20, 20)), st.data())
@settings(max_examples=60, deadline=None)
def test_backends_agree_on_unwrap(phase, data):
    start = data.draw(st.integers(0, phase.size - 1))
    a, bad_a = _kernels.unwrap_from_numpy(phase, start, 0.9 * np.pi)
    b, bad_b = _kernels.unwrap_from_numba(phase, start, 0.9 * np.pi)
    assert np.allclose(a, b, atol=1e-9)
    assert bad_a == bad_b


@pytest.mark.parametrize("flag,expected", [("1", "numpy"), ("0", None)])
def test_env_flag_selects_backend(flag, expected):
    import os
    import subprocess
    import sys

    env = dict(os.environ, QSHOCK_DISABLE_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from qshock import _kernels; print(_kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.strip()
    if expected is None:
        expected = "numba" if _kernels.HAVE_NUMBA else "numpy"
    assert out == expected
