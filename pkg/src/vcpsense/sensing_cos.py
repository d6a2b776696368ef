"""Classical OFDM sensing baseline.

Per-symbol CP strip, M-point unitary DFT, data-symbol removal by
pointwise ratio or conjugate product (cyclic cross-correlation), then a
2-D DFT to the range-Doppler map.  This path strictly follows the
communication frame, so it only sees targets whose round-trip delay fits
inside the communication CP.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .waveform import SystemParams, TimeSignal, ufft, uifft


@dataclass
class Rdm:
    """Range-Doppler map: values[k, l] with cyclic Doppler/delay axes.

    delay_step is seconds per delay bin (Ts); doppler_step is Hz per
    Doppler bin.  Both are attached by the pipeline that knows the frame
    geometry; transforms leave them None.
    """

    values: np.ndarray
    kind: str                      # 'ratio' or 'ccc'
    origin: str                    # 'cos' or 'vcp'
    delay_step: Optional[float] = None
    doppler_step: Optional[float] = None

    @property
    def n_doppler(self) -> int:
        return self.values.shape[0]

    @property
    def n_delay(self) -> int:
        return self.values.shape[1]


def sinc_kernel(x: int, y) -> np.ndarray:
    """Aliased-sinc (Dirichlet) kernel: the x-point DFT of a unit tone at y.

    Equals sum_{n<x} exp(2j*pi*n*y/x)/sqrt(x); takes the limit value
    sqrt(x) wherever y is a multiple of x.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    y = np.asarray(y, dtype=float)
    r = np.mod(y, x)
    on_grid = np.isclose(r, 0.0) | np.isclose(r, float(x))
    den = np.sin(np.pi * y / x)
    num = np.sin(np.pi * y)
    with np.errstate(invalid="ignore", divide="ignore"):
        mag = np.where(on_grid, np.sqrt(float(x)), num / np.where(on_grid, 1.0, den) / np.sqrt(x))
    phase = np.where(on_grid, 1.0 + 0j, np.exp(1j * np.pi * (x - 1) * y / x))
    out = mag * phase
    return out if out.ndim else complex(out)


def cos_demod(rx: TimeSignal, params: SystemParams) -> np.ndarray:
    """Strip each symbol's CP and DFT: returns X[m, n]."""
    x = np.asarray(rx.samples)
    M, N, Q = params.M, params.N, params.Q
    if len(x) != N * (M + Q):
        raise ValueError(f"expected N(M+Q)={N * (M + Q)} samples, got {len(x)}")
    cols = x.reshape(N, M + Q)[:, Q:].T
    return ufft(cols, axis=0)


def _rdm_2d(R_mn: np.ndarray) -> np.ndarray:
    # m -> l via unitary IDFT, n -> k via unitary DFT; output indexed [k, l].
    return ufft(uifft(R_mn, axis=0), axis=1).T


def rdm_ratio_cos(X: np.ndarray, S: np.ndarray, *, delay_step=None,
                  doppler_step=None) -> Rdm:
    """Data removal by pointwise division; S must be zero-free."""
    if X.shape != S.shape:
        raise ValueError("X and S shapes differ")
    if np.any(S == 0):
        raise ValueError("reference grid contains zeros; ratio RDM undefined")
    vals = _rdm_2d(X / S)
    return Rdm(vals, kind="ratio", origin="cos",
               delay_step=delay_step, doppler_step=doppler_step)


def rdm_ccc_cos(X: np.ndarray, S: np.ndarray, *, delay_step=None,
                doppler_step=None) -> Rdm:
    """Data removal by pointwise conjugate product (cyclic cross-correlation)."""
    if X.shape != S.shape:
        raise ValueError("X and S shapes differ")
    vals = _rdm_2d(X * np.conj(S))
    return Rdm(vals, kind="ccc", origin="cos",
               delay_step=delay_step, doppler_step=doppler_step)
