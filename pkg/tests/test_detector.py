import numpy as np
import pytest
from scipy.constants import c

from vcpsense.channel import single_target
from vcpsense.detector import (CfarParams, Detection, cfar_background_map,
                               cfar_detect, cfar_threshold_map,
                               match_detections)
from vcpsense.sensing_cos import Rdm


def exp_rdm(shape, rng, scale=1.0):
    vals = np.sqrt(rng.exponential(scale, shape)) * np.exp(
        1j * rng.uniform(0, 2 * np.pi, shape))
    return Rdm(vals, kind="ccc", origin="vcp", delay_step=1.0, doppler_step=1.0)


class TestWindow:
    def test_reference_cell_count(self):
        p = CfarParams(pf=1e-6, ng_k=3, ng_l=3, nr_k=2, nr_l=5)
        assert p.n_reference == 138  # 11*17 - 7*7

    def test_beta_value(self):
        p = CfarParams(pf=1e-6, ng_k=3, ng_l=3, nr_k=2, nr_l=5)
        assert p.beta == pytest.approx(14.530729475390991, rel=1e-12)

    def test_empty_reference_rejected(self):
        with pytest.raises(ValueError):
            CfarParams(pf=0.1, ng_k=1, ng_l=1, nr_k=0, nr_l=0)

    def test_background_map_matches_bruteforce(self):
        rng = np.random.default_rng(0)
        p = CfarParams(pf=1e-3, ng_k=1, ng_l=2, nr_k=2, nr_l=1)
        rdm = exp_rdm((11, 13), rng)
        P = np.abs(rdm.values) ** 2
        got = cfar_background_map(rdm, p)
        nk, nl = P.shape
        for k in range(nk):
            for l in range(nl):
                acc = 0.0
                cnt = 0
                for dk in range(-(p.nr_k + p.ng_k), p.nr_k + p.ng_k + 1):
                    for dl in range(-(p.nr_l + p.ng_l), p.nr_l + p.ng_l + 1):
                        if abs(dk) <= p.ng_k and abs(dl) <= p.ng_l:
                            continue
                        acc += P[(k + dk) % nk, (l + dl) % nl]
                        cnt += 1
                assert cnt == p.n_reference
                assert got[k, l] == pytest.approx(acc / cnt, rel=1e-9)

    def test_window_larger_than_map(self):
        rng = np.random.default_rng(1)
        p = CfarParams(pf=1e-3, ng_k=3, ng_l=3, nr_k=2, nr_l=5)
        with pytest.raises(ValueError):
            cfar_threshold_map(exp_rdm((8, 40), rng), p)


class TestFalseAlarmRate:
    def test_exact_pf_on_exponential_cells(self):
        rng = np.random.default_rng(2)
        p = CfarParams(pf=1e-2, ng_k=3, ng_l=3, nr_k=2, nr_l=5)
        fa = total = 0
        for _ in range(12):
            rdm = exp_rdm((100, 1000), rng)
            thr = cfar_threshold_map(rdm, p)
            fa += int((np.abs(rdm.values) ** 2 >= thr).sum())
            total += rdm.values.size
        assert total >= 1e6
        assert 0.5 * p.pf <= fa / total <= 2.0 * p.pf

    def test_pf_at_1e3(self):
        rng = np.random.default_rng(3)
        p = CfarParams(pf=1e-3, ng_k=3, ng_l=3, nr_k=2, nr_l=5)
        fa = total = 0
        for _ in range(12):
            rdm = exp_rdm((100, 1000), rng)
            thr = cfar_threshold_map(rdm, p)
            fa += int((np.abs(rdm.values) ** 2 >= thr).sum())
            total += rdm.values.size
        assert 0.5e-3 <= fa / total <= 2e-3

    def test_scale_invariance(self):
        rng = np.random.default_rng(4)
        p = CfarParams(pf=1e-2, ng_k=2, ng_l=2, nr_k=2, nr_l=2)
        rdm = exp_rdm((40, 60), rng)
        d1 = {(d.k_star, d.l_star) for d in cfar_detect(rdm, p)}
        rdm2 = Rdm(rdm.values * (7.7 - 3.3j), kind=rdm.kind, origin=rdm.origin,
                   delay_step=1.0, doppler_step=1.0)
        d2 = {(d.k_star, d.l_star) for d in cfar_detect(rdm2, p)}
        assert d1 == d2


class TestDetections:
    def test_parameter_estimates(self):
        vals = np.full((16, 32), 0.1, dtype=complex)
        vals[5, 7] = 40.0
        rdm = Rdm(vals, kind="ratio", origin="vcp",
                  delay_step=2e-9, doppler_step=1000.0)
        p = CfarParams(pf=1e-4, ng_k=1, ng_l=1, nr_k=2, nr_l=2)
        dets = cfar_detect(rdm, p)
        assert len(dets) == 1
        d = dets[0]
        assert (d.k_star, d.l_star) == (5, 7)
        assert d.tau_hat == pytest.approx(7 * 2e-9)
        assert d.nu_hat == pytest.approx(5000.0)
        assert d.power >= d.threshold

    def test_steps_fallback_from_segmentation(self):
        from vcpsense.sensing_vcp import SegmentationParams
        vals = np.full((16, 32), 0.1, dtype=complex)
        vals[3, 9] = 50.0
        rdm = Rdm(vals, kind="ratio", origin="vcp")
        seg = SegmentationParams(m_tilde=32, q_tilde=4, q_bar=2)
        p = CfarParams(pf=1e-4, ng_k=1, ng_l=1, nr_k=2, nr_l=2)
        dets = cfar_detect(rdm, p, seg=seg, ts=1e-6)
        d = dets[0]
        assert d.tau_hat == pytest.approx(9e-6)
        assert d.nu_hat == pytest.approx(3 / (30 * 16 * 1e-6))


class TestMatching:
    def _rdm(self):
        # 1 GHz sampling grid 16 x 32 for easy bin arithmetic.
        vals = np.zeros((16, 32), dtype=complex)
        return Rdm(vals, kind="ccc", origin="vcp",
                   delay_step=1e-9, doppler_step=1e3)

    def test_empty_detections(self):
        rdm = self._rdm()
        ts = single_target(4 * 1e-9 * c / 2, 0.0, _FakeParams(), alpha=1.0)
        res = match_detections([], ts, rdm)
        assert res.pd == 0.0 and res.false_alarms == 0

    def test_exact_hits(self):
        rdm = self._rdm()
        ts = single_target(4 * 1e-9 * c / 2, 0.0, _FakeParams(), alpha=1.0)
        dets = [Detection(k_star=0, l_star=4, power=1.0, threshold=0.5)]
        res = match_detections(dets, ts, rdm)
        assert res.pd == 1.0 and res.false_alarms == 0

    def test_spurious_detection_counts_false_alarm(self):
        rdm = self._rdm()
        ts = single_target(4 * 1e-9 * c / 2, 0.0, _FakeParams(), alpha=1.0)
        dets = [Detection(k_star=8, l_star=20, power=1.0, threshold=0.5)]
        res = match_detections(dets, ts, rdm)
        assert res.pd == 0.0 and res.false_alarms == 1

    def test_cyclic_tolerance(self):
        rdm = self._rdm()
        ts = single_target(0.0, 0.0, _FakeParams(), alpha=1.0)
        dets = [Detection(k_star=15, l_star=30, power=1.0, threshold=0.5)]
        res = match_detections(dets, ts, rdm, tol_bins=(1, 2))
        assert res.pd == 1.0  # wraps to (0, 0) within the box


class _FakeParams:
    fc = 1.0
    B = 1e9
    Ts = 1e-9
