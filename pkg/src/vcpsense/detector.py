"""2-D cell-averaging CFAR detection on range-Doppler maps.

Both RDM axes are DFT axes, so windows wrap cyclically and every cell has
exactly the same number of reference cells.  The per-cell background
estimate is the mean reference power; the threshold multiplier beta
follows from the exponential-cell false-alarm identity, which makes the
detector scale invariant.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .channel import TargetSet
from .sensing_cos import Rdm
from .sensing_vcp import SegmentationParams


@dataclass(frozen=True)
class CfarParams:
    """False-alarm target and guard/reference half-widths in bins."""

    pf: float
    ng_k: int = 3
    ng_l: int = 3
    nr_k: int = 2
    nr_l: int = 5

    def __post_init__(self):
        if not 0.0 < self.pf < 1.0:
            raise ValueError("pf must be in (0, 1)")
        if min(self.ng_k, self.ng_l, self.nr_k, self.nr_l) < 0:
            raise ValueError("window widths must be nonnegative")
        if self.n_reference <= 0:
            raise ValueError("reference window is empty")

    @property
    def n_reference(self) -> int:
        """Reference-cell count: outer box minus guard box."""
        outer = (2 * (self.nr_k + self.ng_k) + 1) * (2 * (self.nr_l + self.ng_l) + 1)
        guard = (2 * self.ng_k + 1) * (2 * self.ng_l + 1)
        return outer - guard

    @property
    def beta(self) -> float:
        """Threshold multiplier giving the target pf on exponential cells."""
        n = self.n_reference
        return n * (self.pf ** (-1.0 / n) - 1.0)


@dataclass
class Detection:
    k_star: int
    l_star: int
    power: float
    threshold: float
    tau_hat: Optional[float] = None
    nu_hat: Optional[float] = None


def _cyclic_box_sum(P: np.ndarray, hk: int, hl: int) -> np.ndarray:
    """Sum of P over the (2hk+1) x (2hl+1) box centered at each cell, wrapping."""
    nk, nl = P.shape
    if 2 * hk + 1 > nk or 2 * hl + 1 > nl:
        raise ValueError(
            f"CFAR window ({2 * hk + 1} x {2 * hl + 1}) larger than the "
            f"map ({nk} x {nl}); enlarge the block or shrink the window"
        )
    padded = np.pad(P, ((hk, hk), (hl, hl)), mode="wrap")
    # Integral image with a leading zero row/column for O(1) box queries.
    ii = np.zeros((padded.shape[0] + 1, padded.shape[1] + 1))
    ii[1:, 1:] = np.cumsum(np.cumsum(padded, axis=0), axis=1)
    w_k, w_l = 2 * hk + 1, 2 * hl + 1
    return (ii[w_k:, w_l:] - ii[:-w_k, w_l:] - ii[w_k:, :-w_l] + ii[:-w_k, :-w_l])[
        :nk, :nl
    ]


def cfar_background_map(rdm: Rdm, params: CfarParams) -> np.ndarray:
    """Per-cell background power estimate: mean over the reference ring."""
    P = np.abs(rdm.values) ** 2
    outer = _cyclic_box_sum(P, params.nr_k + params.ng_k, params.nr_l + params.ng_l)
    guard = _cyclic_box_sum(P, params.ng_k, params.ng_l)
    return (outer - guard) / params.n_reference


def cfar_threshold_map(rdm: Rdm, params: CfarParams) -> np.ndarray:
    """Per-cell CA-CFAR threshold over the whole map."""
    return params.beta * cfar_background_map(rdm, params)


def cfar_detect(rdm: Rdm, params: CfarParams,
                seg: Optional[SegmentationParams] = None,
                ts: Optional[float] = None) -> List[Detection]:
    """All cells whose power meets the local CA-CFAR threshold.

    Physical delay/Doppler estimates come from the RDM's axis steps when
    present, else from (seg, ts).  No peak clustering is applied: one
    super-threshold cell is one detection.
    """
    delay_step, doppler_step = rdm.delay_step, rdm.doppler_step
    if delay_step is None and ts is not None:
        delay_step = ts
    if doppler_step is None and seg is not None and ts is not None:
        doppler_step = seg.doppler_step_hz(rdm.n_doppler, ts)

    thr = cfar_threshold_map(rdm, params)
    P = np.abs(rdm.values) ** 2
    ks, ls = np.nonzero(P >= thr)
    out = []
    for k, l in zip(ks.tolist(), ls.tolist()):
        out.append(Detection(
            k_star=k, l_star=l, power=float(P[k, l]), threshold=float(thr[k, l]),
            tau_hat=None if delay_step is None else l * delay_step,
            nu_hat=None if doppler_step is None else k * doppler_step,
        ))
    return out


def truth_bins(truth: TargetSet, rdm: Rdm) -> List[Tuple[int, int]]:
    """Nearest (k, l) RDM bin of each true target, cyclic."""
    if rdm.delay_step is None or rdm.doppler_step is None:
        raise ValueError("RDM axis steps required to locate truth bins")
    out = []
    for t in truth:
        l = round(t.tau / rdm.delay_step) % rdm.n_delay
        k = round(t.nu / rdm.doppler_step) % rdm.n_doppler
        out.append((k, l))
    return out


def _cyc_dist(a: int, b: int, n: int) -> int:
    d = abs(a - b) % n
    return min(d, n - d)


@dataclass
class MatchResult:
    n_targets: int
    n_detected: int
    false_alarms: int

    @property
    def pd(self) -> float:
        return self.n_detected / self.n_targets if self.n_targets else 0.0


def match_detections(dets: List[Detection], truth: TargetSet, rdm: Rdm,
                     tol_bins: Tuple[int, int] = (3, 3)) -> MatchResult:
    """Score detections against truth with a cyclic tolerance box.

    A target counts as detected if any detection falls within the box
    around its true bin; detections matching no target are false alarms.
    """
    dk, dl = tol_bins
    if dk < 0 or dl < 0:
        raise ValueError("tolerance must be nonnegative")
    bins = truth_bins(truth, rdm)
    detected = [False] * len(bins)
    fa = 0
    for det in dets:
        hit = False
        for i, (k, l) in enumerate(bins):
            if (_cyc_dist(det.k_star, k, rdm.n_doppler) <= dk
                    and _cyc_dist(det.l_star, l, rdm.n_delay) <= dl):
                detected[i] = True
                hit = True
        if not hit:
            fa += 1
    return MatchResult(len(bins), sum(detected), fa)
