"""Flexible sub-block + virtual-CP sensing on communication waveforms.

Simulation library and CLI covering transmit waveform synthesis
(CP-OTFS / RCP-OTFS / OFDM / DFT-s-OFDM), a multi-target RRC echo
channel, the classical per-symbol OFDM sensing baseline, sub-block/VCP
sensing with ratio- and CCC-based range-Doppler maps, 2-D CA-CFAR
detection, closed-form SINR predictions and Monte Carlo validation
experiments.
"""

from .analysis import (SinrInputs, SinrReport, a_critical, b_penalty,
                       empirical_sinr, mtilde_from_vmax, qtilde_from_range,
                       sinr_ccc_vcp, sinr_cos, sinr_ratio_vcp,
                       validate_lemmas, validate_propositions)
from .channel import (NoiseSpec, ScenarioSpec, Target, TargetSet,
                      draw_targets, generate_echo, inject_echo_critical,
                      single_target)
from .detector import (CfarParams, Detection, MatchResult, cfar_detect,
                       match_detections)
from .pipeline import cos_rdms, vcp_rdms
from .sensing_cos import Rdm, cos_demod, rdm_ccc_cos, rdm_ratio_cos, sinc_kernel
from .sensing_vcp import (SegmentationParams, SubBlockSet, add_vcp,
                          rdm_ccc_vcp, rdm_ratio_vcp, reference_segments,
                          segment, subblock_dft)
from .waveform import (DataGrid, SystemParams, TimeSignal, add_cp, add_rcp,
                       demodulate, draw_data, ft_to_time, map_dd_to_ft,
                       modulate, rrc_filter, rrc_taps)

__version__ = "0.1.0"
