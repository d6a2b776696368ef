"""Property tests for the pure numeric primitives."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcpsense.analysis import b_penalty
from vcpsense.sensing_cos import sinc_kernel
from vcpsense.sensing_vcp import SegmentationParams, segment
from vcpsense.waveform import SystemParams, add_cp, ufft, uifft


@settings(max_examples=60, deadline=None)
@given(x=st.integers(1, 64),
       y=st.floats(-128, 128, allow_nan=False, allow_infinity=False))
def test_sinc_kernel_is_tone_dft(x, y):
    direct = np.sum(np.exp(2j * np.pi * np.arange(x) * y / x)) / np.sqrt(x)
    assert sinc_kernel(x, y) == pytest.approx(direct, abs=1e-8 * max(1, np.sqrt(x)))


@settings(max_examples=60, deadline=None)
@given(eps=st.floats(1e-12, 1 - 1e-12, allow_nan=False))
def test_penalty_forms_identical(eps):
    alt = 2 * (math.log(2 * (1 - eps) / math.sqrt(eps * (2 - eps))) - 1)
    assert b_penalty(eps) == pytest.approx(alt, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 24), st.integers(1, 12), st.integers(0, 12),
       st.integers(0))
def test_cp_serialization_index_identity(m, n, q, seed):
    if q >= m:
        q = m - 1
    p = SystemParams(M=m, N=n, Q=q, B=1e9)
    rng = np.random.default_rng(seed % 2**32)
    cols = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    out = add_cp(cols, p).samples
    P = m + q
    idx = np.arange(n * P)
    np.testing.assert_array_equal(out, cols[((idx % P) - q) % m, idx // P])


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 40), st.integers(1, 8), st.integers(0, 8),
       st.integers(1, 400), st.integers(0))
def test_segment_rows_are_strided_views(m_tilde, q_tilde, q_bar, extra, seed):
    if m_tilde <= q_tilde + q_bar:
        m_tilde = q_tilde + q_bar + 1
    seg = SegmentationParams(m_tilde=m_tilde, q_tilde=q_tilde, q_bar=q_bar)
    total = (m_tilde + q_tilde + q_bar) + extra
    rng = np.random.default_rng(seed % 2**32)
    x = rng.standard_normal(total) + 0j
    try:
        blocks = segment(x, seg)
    except ValueError:
        return  # too short for even one sub-block
    for i, row in enumerate(blocks.rows):
        start = i * seg.stride
        np.testing.assert_array_equal(row, x[start:start + m_tilde])
    # The trailing VCP source must exist for every row.
    assert (blocks.n_tilde - 1) * seg.stride + m_tilde + q_tilde <= total


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 32), st.integers(1, 16), st.integers(0))
def test_unitary_transforms_preserve_energy(n1, n2, seed):
    rng = np.random.default_rng(seed % 2**32)
    x = rng.standard_normal((n1, n2)) + 1j * rng.standard_normal((n1, n2))
    for axis in (0, 1):
        e1 = np.sum(np.abs(ufft(x, axis=axis)) ** 2)
        e2 = np.sum(np.abs(uifft(x, axis=axis)) ** 2)
        assert e1 == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-12)
        assert e2 == pytest.approx(np.sum(np.abs(x) ** 2), rel=1e-12)
