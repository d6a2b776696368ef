"""Multi-target sensing channel.

The echo is a sum of scaled, delayed, Doppler-shifted copies of the
transmit block plus AWGN.  Delay and Doppler are applied on a 4x
oversampled RRC-interpolated signal so that targets land off the critical
sample grid, then the receiver RRC decimates back; energy delayed past
the block end is truncated.  A fast critical-rate injection path with
integer delays is kept for statistical validation, where filter effects
would pollute theory tolerances.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT
from scipy.signal import upfirdn

from .rng import complex_normal
from .waveform import SystemParams, TimeSignal, rrc_taps


@dataclass
class Target:
    """One point scatterer.

    alpha already carries the coupling phase exp(-2j*pi*nu*tau) on top of
    the drawn (or supplied) scattering coefficient, so the echo model can
    apply it directly.
    """

    sigma_p2: float
    range_m: float
    velocity_mps: float
    alpha: complex
    fc: float

    def __post_init__(self):
        if self.range_m < 0:
            raise ValueError("range must be nonnegative")
        if self.sigma_p2 <= 0:
            raise ValueError("target power must be positive")

    @property
    def tau(self) -> float:
        """Round-trip delay in seconds."""
        return 2.0 * self.range_m / SPEED_OF_LIGHT

    @property
    def nu(self) -> float:
        """Doppler shift in Hz; positive for an approaching target."""
        return 2.0 * self.velocity_mps * self.fc / SPEED_OF_LIGHT

    def delay_samples(self, Ts: float) -> float:
        return self.tau / Ts

    def doppler_norm(self, Ts: float) -> float:
        return self.nu * Ts


@dataclass
class NoiseSpec:
    sigma_w2: float = 0.0

    def __post_init__(self):
        if self.sigma_w2 < 0:
            raise ValueError("noise power must be nonnegative")


@dataclass
class TargetSet:
    targets: list

    def __len__(self) -> int:
        return len(self.targets)

    def __iter__(self):
        return iter(self.targets)

    @property
    def sigma_P2(self) -> float:
        return sum(t.sigma_p2 for t in self.targets)


@dataclass
class ScenarioSpec:
    """Target scenario for Monte Carlo draws.

    kind 'table2':      3 targets, powers [0, -10, -20] dB, ranges U[0, rmax]
    kind 'detection10': 10 targets, powers [0, -20 x4, -30 x5] dB, ranges
                        linearly spaced over [0, rmax]
    kind 'explicit':    fixed (power, range, velocity[, alpha]) entries
    """

    kind: str = "table2"
    rmax: float = 10.0
    vmax: float = 139.0
    entries: list = field(default_factory=list)

    def powers_db(self) -> list:
        if self.kind == "table2":
            return [0.0, -10.0, -20.0]
        if self.kind == "detection10":
            return [0.0] + [-20.0] * 4 + [-30.0] * 5
        return [e["power_db"] for e in self.entries]


def _draw_alpha(rng, sigma_p2, nu, tau):
    if rng is None:
        raise ValueError("rng required to draw scattering coefficients")
    a = complex(complex_normal(rng, sigma_p2, ()))
    return a * np.exp(-2j * np.pi * nu * tau)


def draw_targets(scenario: ScenarioSpec, params: SystemParams,
                 rng: np.random.Generator) -> TargetSet:
    """Draw one realization of the scenario's targets."""
    out = []
    if scenario.kind == "table2":
        ranges = rng.uniform(0.0, scenario.rmax, 3)
        vels = rng.uniform(-scenario.vmax, scenario.vmax, 3)
        spec = zip(scenario.powers_db(), ranges, vels)
    elif scenario.kind == "detection10":
        ranges = np.linspace(0.0, scenario.rmax, 10)
        vels = rng.uniform(-scenario.vmax, scenario.vmax, 10)
        spec = zip(scenario.powers_db(), ranges, vels)
    elif scenario.kind == "explicit":
        # velocity_mps None means: draw uniformly per realization.
        spec = [(e["power_db"], e["range_m"],
                 e["velocity_mps"] if e.get("velocity_mps") is not None
                 else float(rng.uniform(-scenario.vmax, scenario.vmax)))
                for e in scenario.entries]
    else:
        raise ValueError(f"unknown scenario {scenario.kind!r}")

    for i, (p_db, r, v) in enumerate(spec):
        sigma_p2 = 10.0 ** (p_db / 10.0)
        tau = 2.0 * r / SPEED_OF_LIGHT
        nu = 2.0 * v * params.fc / SPEED_OF_LIGHT
        if scenario.kind == "explicit" and "alpha" in scenario.entries[i]:
            alpha = complex(scenario.entries[i]["alpha"])
        else:
            alpha = _draw_alpha(rng, sigma_p2, nu, tau)
        out.append(Target(sigma_p2=sigma_p2, range_m=float(r),
                          velocity_mps=float(v), alpha=alpha, fc=params.fc))
    return TargetSet(out)


def single_target(range_m: float, velocity_mps: float, params: SystemParams,
                  power_db: float = 0.0, alpha: complex = None,
                  rng: np.random.Generator = None) -> TargetSet:
    """Convenience constructor for one deterministic or drawn target."""
    entry = {"power_db": power_db, "range_m": range_m, "velocity_mps": velocity_mps}
    if alpha is not None:
        entry["alpha"] = alpha
    scenario = ScenarioSpec(kind="explicit", entries=[entry])
    return draw_targets(scenario, params, rng)


def generate_echo(tx: TimeSignal, targets: TargetSet, noise: NoiseSpec,
                  params: SystemParams, rng: np.random.Generator,
                  oversample: int = 4, rolloff: float = 0.2,
                  span: int = 32) -> TimeSignal:
    """Synthesize the received echo block at the critical rate.

    TX RRC interpolates by `oversample`; each target is applied as an
    integer high-rate shift of round(oversample * tau/Ts) plus a Doppler
    phase ramp; the RX RRC decimates back and the combined group delay is
    trimmed so the output aligns sample-for-sample with `tx`.
    """
    L = oversample
    I = len(tx)
    x = np.asarray(tx.samples)
    taps = rrc_taps(rolloff, span, L)
    half = (len(taps) - 1) // 2  # one filter's delay in high-rate samples

    tx_hi = upfirdn(taps, x, up=L)
    acc = np.zeros(len(tx_hi) + L * I, dtype=complex)
    any_target = False
    for t in targets:
        d_hi = round(L * t.delay_samples(params.Ts))
        if d_hi >= L * I:
            raise ValueError(
                f"target delay {t.delay_samples(params.Ts):.1f} samples exceeds "
                f"block length {I}"
            )
        any_target = True
        seg = acc[d_hi:d_hi + len(tx_hi)]
        if t.nu == 0.0:
            seg += t.alpha * tx_hi
        else:
            # Ramp referenced to receive time: high-rate index j maps to
            # critical-rate time (j - half)/L at the output alignment.
            j = np.arange(d_hi, d_hi + len(tx_hi))
            ramp = np.exp(2j * np.pi * t.doppler_norm(params.Ts) * (j - half) / L)
            seg += t.alpha * ramp * tx_hi

    if any_target:
        y = upfirdn(taps, acc, down=L)
    else:
        y = np.zeros(I + span, dtype=complex)
    # Both filters together delay by 2*half high-rate = span critical samples.
    out = y[span:span + I]
    if len(out) < I:
        out = np.pad(out, (0, I - len(out)))
    if noise.sigma_w2 > 0:
        out = out + complex_normal(rng, noise.sigma_w2, I)
    return TimeSignal(out, rate=tx.rate)


def inject_echo_critical(tx: TimeSignal, targets: TargetSet, noise: NoiseSpec,
                         params: SystemParams,
                         rng: np.random.Generator = None) -> TimeSignal:
    """Idealized critical-rate echo for statistical validation.

    Delays must be integer multiples of Ts; the Doppler ramp is applied
    exactly over the critical-rate index.  No pulse shaping, so theory
    tolerances are not polluted by filter effects.
    """
    I = len(tx)
    x = np.asarray(tx.samples)
    out = np.zeros(I, dtype=complex)
    for t in targets:
        lp = t.delay_samples(params.Ts)
        d = round(lp)
        if abs(lp - d) > 1e-6:
            raise ValueError(f"critical-rate injection needs integer delays, got {lp}")
        if d >= I:
            raise ValueError("target delay exceeds block length")
        shifted = np.zeros(I, dtype=complex)
        shifted[d:] = x[:I - d]
        kt = t.doppler_norm(params.Ts)
        if kt != 0.0:
            shifted *= np.exp(2j * np.pi * kt * np.arange(I))
        out += t.alpha * shifted
    if noise.sigma_w2 > 0:
        out = out + complex_normal(rng, noise.sigma_w2, I)
    return TimeSignal(out, rate=tx.rate)
