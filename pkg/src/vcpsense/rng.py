"""Named, seedable random streams.

One experiment seed fans out into independent per-trial streams for data
symbols, receiver noise and target draws, so that adding draws to one
stream never perturbs another and trials can run on any worker in any
order with identical results.
"""

import numpy as np

_STREAM_IDS = {"data": 0, "noise": 1, "targets": 2, "aux": 3}


def stream(seed: int, name: str, trial: int = 0) -> np.random.Generator:
    """Generator for the given (seed, trial, stream-name) triple."""
    try:
        sid = _STREAM_IDS[name]
    except KeyError:
        raise ValueError(f"unknown rng stream {name!r}") from None
    return np.random.default_rng(np.random.SeedSequence((int(seed), int(trial), sid)))


def complex_normal(rng: np.random.Generator, power: float, size) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with the given mean power."""
    scale = np.sqrt(power / 2.0)
    return scale * (rng.standard_normal(size) + 1j * rng.standard_normal(size))
