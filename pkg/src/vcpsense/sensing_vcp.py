"""Sub-block segmentation with virtual cyclic prefix (VCP) sensing.

The echo block is cut into n_tilde sub-blocks of m_tilde samples whose
starts advance by m_tilde - q_bar (adjacent sub-blocks overlap by q_bar).
Adding the q_tilde samples that trail each sub-block onto its head (the
VCP) turns every received sub-block into a sum of cyclic shifts of the
matching transmitted segment, for any target delay up to q_tilde samples,
independent of the communication CP.  Data symbols are then removed in
the frequency domain exactly as in the classical baseline.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .sensing_cos import Rdm
from .waveform import TimeSignal, ufft, uifft


@dataclass(frozen=True)
class SegmentationParams:
    """Sub-block geometry: length m_tilde, VCP q_tilde, overlap q_bar."""

    m_tilde: int
    q_tilde: int
    q_bar: int = 0

    def __post_init__(self):
        if self.q_tilde < 1 or self.q_bar < 0:
            raise ValueError("need q_tilde >= 1 and q_bar >= 0")
        if self.m_tilde <= self.q_tilde + self.q_bar:
            raise ValueError(
                f"need m_tilde > q_tilde + q_bar, got {self.m_tilde} <= "
                f"{self.q_tilde} + {self.q_bar}"
            )
        if self.q_bar > self.m_tilde / 2 - self.q_tilde:
            warnings.warn(
                f"overlap q_bar={self.q_bar} exceeds m_tilde/2 - q_tilde="
                f"{self.m_tilde / 2 - self.q_tilde:.0f}; IN Gaussianity degrades",
                stacklevel=2,
            )

    @property
    def stride(self) -> int:
        return self.m_tilde - self.q_bar

    def n_subblocks(self, total_samples: int) -> int:
        """Sub-block count for a block of the given length."""
        n = (total_samples - self.q_tilde - self.q_bar) // self.stride
        if n < 1:
            raise ValueError(
                f"block of {total_samples} samples too short for {self}"
            )
        return n

    def doppler_step_hz(self, n_tilde: int, Ts: float) -> float:
        """Hz per Doppler bin of the resulting RDM."""
        return 1.0 / (self.stride * n_tilde * Ts)


@dataclass
class SubBlockSet:
    """n_tilde x m_tilde time-domain rows; row n starts at sample n*stride."""

    rows: np.ndarray
    seg: SegmentationParams
    vcp_applied: bool = False

    @property
    def n_tilde(self) -> int:
        return self.rows.shape[0]


def _samples(x) -> np.ndarray:
    return np.asarray(x.samples if isinstance(x, TimeSignal) else x)


def segment(x, seg: SegmentationParams) -> SubBlockSet:
    """Cut the block into overlapping sub-block rows (no VCP yet)."""
    data = _samples(x)
    n_tilde = seg.n_subblocks(len(data))
    need = (n_tilde - 1) * seg.stride + seg.m_tilde + seg.q_tilde
    if len(data) < need:
        raise ValueError(f"need {need} samples, got {len(data)}")
    idx = np.arange(n_tilde)[:, None] * seg.stride + np.arange(seg.m_tilde)[None, :]
    return SubBlockSet(data[idx].copy(), seg)


def add_vcp(blocks: SubBlockSet, x, seg: SegmentationParams) -> SubBlockSet:
    """Fold the q_tilde samples trailing each sub-block onto its head."""
    if blocks.vcp_applied:
        raise ValueError("VCP already applied")
    data = _samples(x)
    starts = np.arange(blocks.n_tilde) * seg.stride
    last_needed = starts[-1] + seg.m_tilde + seg.q_tilde
    if len(data) < last_needed:
        raise ValueError(
            f"source block too short for VCP tail: need {last_needed} samples"
        )
    tails = data[starts[:, None] + seg.m_tilde + np.arange(seg.q_tilde)[None, :]]
    rows = blocks.rows.copy()
    rows[:, :seg.q_tilde] += tails
    return SubBlockSet(rows, seg, vcp_applied=True)


def reference_segments(tx, seg: SegmentationParams):
    """Segment the known transmit block; returns (time rows, spectra S_n[m])."""
    blocks = segment(tx, seg)
    return blocks, subblock_dft(blocks)


def subblock_dft(blocks: SubBlockSet) -> np.ndarray:
    """Unitary DFT of each row: X[n, m]."""
    return ufft(blocks.rows, axis=1)


def _rdm_2d_vcp(R_nm: np.ndarray) -> np.ndarray:
    # m -> l via unitary IDFT, n -> k via unitary DFT; output indexed [k, l].
    return ufft(uifft(R_nm, axis=1), axis=0)


def rdm_ratio_vcp(X: np.ndarray, S: np.ndarray, a="auto", *, delay_step=None,
                  doppler_step=None) -> Rdm:
    """Guarded-ratio RDM: cells where |a*S| < 1 contribute exactly zero.

    The scale a trades masked-cell count against the ratio's tail weight;
    'auto' picks the critical value for which on average one cell of the
    grid is masked, estimating the symbol power from S itself.
    """
    if X.shape != S.shape:
        raise ValueError("X and S shapes differ")
    if a == "auto":
        from .analysis import a_critical
        a = a_critical(float(np.mean(np.abs(S) ** 2)), S.size)
    a = float(a)
    if a <= 0:
        raise ValueError("a must be positive")
    keep = np.abs(a * S) >= 1.0
    ratio = np.zeros_like(X)
    np.divide(X, a * S, out=ratio, where=keep)
    vals = _rdm_2d_vcp(ratio)
    return Rdm(vals, kind="ratio", origin="vcp",
               delay_step=delay_step, doppler_step=doppler_step)


def rdm_ccc_vcp(X: np.ndarray, S: np.ndarray, *, delay_step=None,
                doppler_step=None) -> Rdm:
    """Cyclic cross-correlation RDM: pointwise conjugate product then 2-D DFT."""
    if X.shape != S.shape:
        raise ValueError("X and S shapes differ")
    vals = _rdm_2d_vcp(X * np.conj(S))
    return Rdm(vals, kind="ccc", origin="vcp",
               delay_step=delay_step, doppler_step=doppler_step)
