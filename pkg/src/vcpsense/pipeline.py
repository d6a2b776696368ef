"""End-to-end sensing runs: received block -> range-Doppler maps.

These helpers wire segmentation, reference computation and data removal
together and attach physical axis steps to the maps so detection and
SINR measurement can report seconds and Hz.
"""

from typing import Tuple

import numpy as np

from .sensing_cos import Rdm, cos_demod, rdm_ccc_cos, rdm_ratio_cos
from .sensing_vcp import (SegmentationParams, add_vcp, rdm_ccc_vcp,
                          rdm_ratio_vcp, reference_segments, segment,
                          subblock_dft)
from .waveform import SystemParams, TimeSignal


def vcp_rdms(rx: TimeSignal, tx: TimeSignal, seg: SegmentationParams,
             params: SystemParams, a="auto") -> Tuple[Rdm, Rdm]:
    """Sub-block/VCP sensing: returns (ratio RDM, CCC RDM)."""
    blocks = add_vcp(segment(rx, seg), rx, seg)
    X = subblock_dft(blocks)
    _, S = reference_segments(tx, seg)
    dstep = params.Ts
    fstep = seg.doppler_step_hz(blocks.n_tilde, params.Ts)
    rr = rdm_ratio_vcp(X, S, a=a, delay_step=dstep, doppler_step=fstep)
    rc = rdm_ccc_vcp(X, S, delay_step=dstep, doppler_step=fstep)
    return rr, rc


def cos_rdms(rx: TimeSignal, S_ft: np.ndarray,
             params: SystemParams) -> Tuple[Rdm, Rdm]:
    """Classical baseline sensing: returns (ratio RDM, CCC RDM).

    S_ft is the known transmitted frequency-time grid.  The ratio path is
    applied as-is even for Gaussian-spectrum waveforms (no guard), which
    is exactly the baseline being compared against.
    """
    X = cos_demod(rx, params)
    dstep = params.Ts
    fstep = 1.0 / ((params.M + params.Q) * params.N * params.Ts)
    rr = rdm_ratio_cos(X, S_ft, delay_step=dstep, doppler_step=fstep)
    rc = rdm_ccc_cos(X, S_ft, delay_step=dstep, doppler_step=fstep)
    return rr, rc
