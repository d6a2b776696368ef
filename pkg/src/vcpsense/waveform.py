"""Transmit-side waveform generation.

Data symbols are laid out on an M x N delay-Doppler grid, mapped to the
frequency-time domain, transformed to time-domain columns and serialized
with either a per-symbol cyclic prefix (CP) or a single block-level
reduced CP (RCP).  OFDM and DFT-s-OFDM fall out of the same machinery by
suppressing one or both grid transforms.  All DFTs are unitary.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import upfirdn

WAVEFORMS = ("cp-otfs", "rcp-otfs", "ofdm", "dft-s-ofdm")
CONSTELLATIONS = ("qpsk", "16qam", "64qam")


@dataclass(frozen=True)
class SystemParams:
    """Grid dimensions and physical rates governing one transmission block.

    M:  subcarriers / delay bins per symbol
    N:  symbols / Doppler bins per block
    Q:  communication CP length in samples
    fc: carrier frequency (Hz)
    B:  bandwidth (Hz); the critical sample interval is Ts = 1/B
    """

    M: int
    N: int
    Q: int
    fc: float = 60.48e9
    B: float = 1.825e9
    waveform: str = "cp-otfs"
    constellation: str = "64qam"
    sigma_d2: float = 1.0

    def __post_init__(self):
        if not (self.M > self.Q >= 0):
            raise ValueError(f"need M > Q >= 0, got M={self.M}, Q={self.Q}")
        if self.N < 1:
            raise ValueError(f"need N >= 1, got N={self.N}")
        if self.B <= 0:
            raise ValueError("bandwidth must be positive")
        if self.waveform not in WAVEFORMS:
            raise ValueError(f"unknown waveform {self.waveform!r}")
        if self.constellation not in CONSTELLATIONS:
            raise ValueError(f"unknown constellation {self.constellation!r}")
        if self.sigma_d2 <= 0:
            raise ValueError("sigma_d2 must be positive")

    @property
    def Ts(self) -> float:
        return 1.0 / self.B

    @property
    def total_samples(self) -> int:
        """Block length I: N(M+Q) with per-symbol CP, M*N+Q with RCP."""
        if self.waveform == "rcp-otfs":
            return self.M * self.N + self.Q
        return self.N * (self.M + self.Q)


@dataclass
class DataGrid:
    """M x N data symbols; symbols[l, k] holds d_{k*M + l}."""

    symbols: np.ndarray

    @property
    def M(self) -> int:
        return self.symbols.shape[0]

    @property
    def N(self) -> int:
        return self.symbols.shape[1]


@dataclass
class TimeSignal:
    """Complex baseband samples tagged with their sample rate."""

    samples: np.ndarray
    rate: float
    oversample: int = 1

    def __len__(self) -> int:
        return len(self.samples)


def ufft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unitary forward DFT."""
    return np.fft.fft(x, axis=axis) / np.sqrt(x.shape[axis])


def uifft(x: np.ndarray, axis: int = -1) -> np.ndarray:
    """Unitary inverse DFT."""
    return np.fft.ifft(x, axis=axis) * np.sqrt(x.shape[axis])


def constellation_points(name: str, sigma_d2: float = 1.0) -> np.ndarray:
    """Square-QAM/QPSK points scaled to an exact mean power of sigma_d2."""
    side = {"qpsk": 2, "16qam": 4, "64qam": 8}[name]
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    pts = (levels[:, None] + 1j * levels[None, :]).ravel()
    return pts * np.sqrt(sigma_d2 / np.mean(np.abs(pts) ** 2))


def draw_data(params: SystemParams, rng: np.random.Generator) -> DataGrid:
    """i.i.d. uniform draw of M x N symbols from the configured constellation."""
    pts = constellation_points(params.constellation, params.sigma_d2)
    idx = rng.integers(0, len(pts), size=(params.M, params.N))
    return DataGrid(pts[idx])


def map_dd_to_ft(grid: DataGrid, params: SystemParams) -> np.ndarray:
    """Delay-Doppler grid -> frequency-time grid S[m, n].

    Critical sampling is assumed throughout, so the delay axis maps through
    a unitary forward DFT and the Doppler axis through a unitary inverse
    DFT.  For dft-s-ofdm the Doppler-axis transform is suppressed; for ofdm
    both are, making the mapping the identity.
    """
    if grid.symbols.shape != (params.M, params.N):
        raise ValueError(
            f"grid shape {grid.symbols.shape} does not match (M, N)="
            f"({params.M}, {params.N})"
        )
    d = grid.symbols
    if params.waveform == "ofdm":
        return d.copy()
    if params.waveform == "dft-s-ofdm":
        return ufft(d, axis=0)
    return uifft(ufft(d, axis=0), axis=1)


def ft_to_time(S: np.ndarray, params: SystemParams) -> np.ndarray:
    """Frequency-time grid -> time-domain columns s[l, n] (unitary IDFT over m)."""
    return uifft(S, axis=0)


def add_cp(cols: np.ndarray, params: SystemParams) -> TimeSignal:
    """Per-symbol CP: prepend the last Q samples of each column, serialize."""
    M, N = cols.shape
    if params.Q >= M:
        raise ValueError(f"CP length Q={params.Q} must be < M={M}")
    with_cp = np.concatenate([cols[M - params.Q:, :], cols], axis=0)
    return TimeSignal(with_cp.T.ravel(), rate=params.B)


def add_rcp(cols: np.ndarray, params: SystemParams) -> TimeSignal:
    """Single block-level CP: prepend the last Q samples of the serialized block."""
    M, N = cols.shape
    if params.Q >= M * N:
        raise ValueError(f"RCP length Q={params.Q} must be < M*N={M * N}")
    serial = cols.T.ravel()
    return TimeSignal(np.concatenate([serial[len(serial) - params.Q:], serial]),
                      rate=params.B)


def rrc_taps(rolloff: float, span: int, sps: int) -> np.ndarray:
    """Unit-energy root-raised-cosine FIR, span*sps+1 taps.

    A matched pair therefore has unit end-to-end passband gain and a
    combined group delay of span*sps samples at the working rate.
    """
    if not 0.0 < rolloff <= 1.0:
        raise ValueError("rolloff must be in (0, 1]")
    if span < 1 or sps < 1:
        raise ValueError("span and sps must be >= 1")
    n = np.arange(-(span * sps) // 2, (span * sps) // 2 + 1)
    t = n / sps
    h = np.empty(len(t))
    b = rolloff
    # Remove the two singular points of the closed form before evaluating it.
    at_zero = t == 0
    at_quarter = np.isclose(np.abs(4.0 * b * t), 1.0)
    regular = ~(at_zero | at_quarter)
    tr = t[regular]
    h[regular] = (np.sin(np.pi * tr * (1 - b)) + 4 * b * tr * np.cos(np.pi * tr * (1 + b))) / (
        np.pi * tr * (1 - (4 * b * tr) ** 2)
    )
    h[at_zero] = 1 - b + 4 * b / np.pi
    h[at_quarter] = (b / np.sqrt(2)) * (
        (1 + 2 / np.pi) * np.sin(np.pi / (4 * b)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * b))
    )
    return h / np.sqrt(np.sum(h**2))


def rrc_filter(sig: TimeSignal, rolloff: float = 0.2, *, up: int = 1, down: int = 1,
               span: int = 32) -> TimeSignal:
    """RRC filtering with optional zero-stuffed interpolation or decimation.

    up=L zero-stuffs by L then filters; down=L filters then keeps every
    L-th sample.  Output includes the filter transient; callers trim using
    the known group delay of (span*sps)/2 working-rate taps per filter.
    """
    if up > 1 and down > 1:
        raise ValueError("use separate calls for interpolation and decimation")
    sps = max(up, down, 1)
    taps = rrc_taps(rolloff, span, sps)
    out = upfirdn(taps, sig.samples, up=up, down=down)
    rate = sig.rate * up / down
    return TimeSignal(out, rate=rate, oversample=max(1, sig.oversample * up // down))


def modulate(grid: DataGrid, params: SystemParams) -> TimeSignal:
    """Full transmit chain at the critical rate: grid -> S -> columns -> CP."""
    cols = ft_to_time(map_dd_to_ft(grid, params), params)
    if params.waveform == "rcp-otfs":
        return add_rcp(cols, params)
    return add_cp(cols, params)


def demodulate(sig: TimeSignal, params: SystemParams) -> DataGrid:
    """Inverse of :func:`modulate` for a clean (noiseless, delay-free) block."""
    x = np.asarray(sig.samples)
    if len(x) != params.total_samples:
        raise ValueError(
            f"signal length {len(x)} does not match block length {params.total_samples}"
        )
    if params.waveform == "rcp-otfs":
        cols = x[params.Q:].reshape(params.N, params.M).T
    else:
        cols = x.reshape(params.N, params.M + params.Q)[:, params.Q:].T
    S = ufft(cols, axis=0)
    if params.waveform == "ofdm":
        d = S
    elif params.waveform == "dft-s-ofdm":
        d = uifft(S, axis=0)
    else:
        d = uifft(ufft(S, axis=1), axis=0)
    return DataGrid(d)
