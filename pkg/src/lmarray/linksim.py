"""Monte Carlo bit-error-rate comparison against conventional MIMO.

The load-modulated transmitter is compared with a conventional
two-chain transmitter over an i.i.d. Rayleigh flat-fading 2x2 channel
with Gray-mapped 16-QAM on both streams.  The loaded-network model
enters through a 256-entry table of "effective" symbol pairs: for each
nominal pair the solved (optionally perturbed) network is driven with
the pair's feed voltage, and the resulting port currents are mapped
back through the inverse basis matrix.  With ideal loads that table is
the identity, so the two transmitters are statistically equivalent;
load errors displace the radiated constellation and the degradation
shows up directly in the BER.

Channel and noise conventions (chosen once, documented here so runs
are comparable): total transmit energy is split across the 2 streams
(unit average symbol energy per stream), 4 bits per symbol per stream,
H entries CN(0,1) redrawn per channel use, receiver noise CN(0, N0)
per antenna with N0 = Eb/(Eb/N0).  The random source is numpy PCG64;
per-SNR-point substreams are split off a root SeedSequence so each
grid point is independently reproducible, and load-error draws use a
separate child so they never shift the noise stream.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .antenna import AntennaZMatrix
from .beamspace import (
    TWO_PI,
    BasisConfig,
    SymbolPair,
    feeding_voltage,
    power_norm_factor,
)
from .errors import ConfigError
from .formatting import format_fixed
from .oracle import solve_network
from .synthesis import synthesize
from .twoport import ReactanceTuple, Topology

# Gray labelling: two bits per axis, 00 01 11 10 -> -3 -1 +1 +3.
_GRAY_TO_LEVEL = {0b00: -3, 0b01: -1, 0b11: 1, 0b10: 3}

#: Symbol alphabet indexed by the 4-bit label (I bits high, Q bits low).
GRAY_SYMBOLS = np.array(
    [
        complex(_GRAY_TO_LEVEL[(m >> 2) & 3], _GRAY_TO_LEVEL[m & 3])
        for m in range(16)
    ]
)

_POPCOUNT = np.array([bin(m).count("1") for m in range(16)], dtype=np.int64)

#: Per-stream scale giving unit average symbol energy (E|s|^2 = 10).
_STREAM_SCALE = 1.0 / math.sqrt(10.0)

_SLICE_LEVELS = np.array([-3, -1, 1, 3], dtype=float)


class LoadErrorKind(enum.Enum):
    NONE = "none"
    MULTIPLICATIVE = "multiplicative"
    QUANTIZED = "quantized"


@dataclass(frozen=True)
class LoadErrorModel:
    """Deviation of realized loads from synthesized values.

    MULTIPLICATIVE scales every normalized load value by (1 + u) with u
    uniform in +-tolerance, drawn once per run per pair (a component
    tolerance, fixed while the device operates).  QUANTIZED rounds each
    normalized value to the nearest multiple of ``step``.
    """

    kind: LoadErrorKind = LoadErrorKind.NONE
    tolerance: float = 0.0
    step: float = 0.0

    def __post_init__(self):
        if self.tolerance < 0.0:
            raise ConfigError("tolerance must be >= 0")
        if self.kind is LoadErrorKind.QUANTIZED and not self.step > 0.0:
            raise ConfigError("quantized model needs step > 0")


class Transmitter(enum.Enum):
    CONVENTIONAL = "conventional"
    LMA_IDEAL = "lma_ideal"
    LMA_ERRED = "lma_erred"


class Receiver(enum.Enum):
    ML = "ml"
    ZF = "zf"


@dataclass(frozen=True)
class BerPoint:
    snr_db: float
    ber: float
    bits_simulated: int
    bit_errors: int


@dataclass(frozen=True)
class BerCurve:
    transmitter: Transmitter
    receiver: Receiver
    seed: int
    points: tuple[BerPoint, ...]


@dataclass(frozen=True)
class BerConfig:
    snr_grid_db: tuple = (0.0, 4.0, 8.0, 12.0, 16.0, 20.0)
    min_bit_errors: int = 200
    max_bits: int = 40_000_000
    seed: int = 1
    transmitter: Transmitter = Transmitter.LMA_IDEAL
    error_model: LoadErrorModel = field(default_factory=LoadErrorModel)
    receiver: Receiver = Receiver.ML
    batch_size: int = 4096

    def __post_init__(self):
        if len(self.snr_grid_db) == 0:
            raise ConfigError("SNR grid is empty")
        if self.min_bit_errors <= 0 or self.max_bits <= 0 or self.batch_size <= 0:
            raise ConfigError("error/bit budgets must be positive")


def perturb_loads(loads: ReactanceTuple, model: LoadErrorModel, rng) -> ReactanceTuple:
    """Apply the error model to one load tuple (normalized values)."""
    values = np.array([loads.v1, loads.v2, loads.v3])
    if model.kind is LoadErrorKind.MULTIPLICATIVE:
        values = values * (1.0 + rng.uniform(-model.tolerance, model.tolerance, 3))
    elif model.kind is LoadErrorKind.QUANTIZED:
        values = np.round(values / model.step) * model.step
    return ReactanceTuple(loads.topology, *values)


def effective_symbols(
    pair: SymbolPair,
    loads1: ReactanceTuple,
    loads2: ReactanceTuple,
    zm: AntennaZMatrix,
    cfg: BasisConfig,
) -> tuple[complex, complex]:
    """Beamspace symbols actually radiated by a (possibly perturbed)
    loaded network driven at the pair's nominal feed voltage.

    The solved port currents are pushed back through the inverse of the
    current-mapping matrix and the nominal q*e^{j phi} factor is
    removed, so ideal loads return (s1, s2) and any load error shows up
    as constellation distortion (including the mismatch loss from
    Zin != Z0, because the feed voltage is not re-normalized).
    """
    sol = solve_network(loads1, loads2, zm, complex(feeding_voltage(pair, cfg)))
    g, r = cfg.basis_gain()
    q = power_norm_factor(pair, zm, cfg)
    k = q / math.sqrt(TWO_PI) * complex(math.cos(cfg.phase_shift_rad),
                                        math.sin(cfg.phase_shift_rad))
    s2_hat = sol.i2 * r / k
    s1_hat = sol.i1 / k + (g / r) * s2_hat
    return s1_hat, s2_hat


def build_transmit_table(
    transmitter: Transmitter,
    error_model: LoadErrorModel,
    zm: AntennaZMatrix,
    cfg: BasisConfig,
    rng,
) -> np.ndarray:
    """(16, 16, 2) table of transmit symbol pairs by Gray label.

    CONVENTIONAL is the nominal grid.  The LMA entries run the full
    synthesize -> perturb -> solve -> invert pipeline per pair.
    """
    table = np.empty((16, 16, 2), dtype=complex)
    for m1 in range(16):
        for m2 in range(16):
            pair = SymbolPair(GRAY_SYMBOLS[m1], GRAY_SYMBOLS[m2])
            if transmitter is Transmitter.CONVENTIONAL:
                table[m1, m2] = (pair.s1, pair.s2)
                continue
            res = synthesize(pair, zm, cfg, topology=Topology.T_WITH_TL, s=0.0)
            loads1, loads2 = res.loads1, res.loads2
            if transmitter is Transmitter.LMA_ERRED:
                loads1 = perturb_loads(loads1, error_model, rng)
                loads2 = perturb_loads(loads2, error_model, rng)
            table[m1, m2] = effective_symbols(pair, loads1, loads2, zm, cfg)
    return table


def _ml_detect(y, h, candidates):
    """Exhaustive minimum-distance detection over all 256 label pairs.

    y: (n, 2), h: (n, 2, 2), candidates: (256, 2).  Returns (n,) flat
    label indices m1*16 + m2.
    """
    hc = np.einsum("nij,kj->nik", h, candidates)
    diff = y[:, :, None] - hc
    metric = np.abs(diff[:, 0, :]) ** 2 + np.abs(diff[:, 1, :]) ** 2
    return np.argmin(metric, axis=1)


#: Gray code of each slicer level index (levels -3,-1,1,3 -> 00,01,11,10).
_GRAY_OF_LEVEL_IDX = np.array([0b00, 0b01, 0b11, 0b10], dtype=np.int64)


def _zf_detect(y, h):
    """Channel inversion then per-stream slicing to Gray labels."""
    det = h[:, 0, 0] * h[:, 1, 1] - h[:, 0, 1] * h[:, 1, 0]
    x0 = (h[:, 1, 1] * y[:, 0] - h[:, 0, 1] * y[:, 1]) / det
    x1 = (h[:, 0, 0] * y[:, 1] - h[:, 1, 0] * y[:, 0]) / det
    labels = np.empty((y.shape[0], 2), dtype=np.int64)
    for col, x in enumerate((x0, x1)):
        s = x / _STREAM_SCALE
        i_idx = np.argmin(np.abs(s.real[:, None] - _SLICE_LEVELS[None, :]), axis=1)
        q_idx = np.argmin(np.abs(s.imag[:, None] - _SLICE_LEVELS[None, :]), axis=1)
        labels[:, col] = (_GRAY_OF_LEVEL_IDX[i_idx] << 2) | _GRAY_OF_LEVEL_IDX[q_idx]
    return labels


def run_ber(
    config: BerConfig,
    zm: AntennaZMatrix | None = None,
    cfg: BasisConfig | None = None,
) -> BerCurve:
    """Simulate the configured transmitter over the SNR grid.

    Per point: draw label pairs, map them through the transmit table,
    push through y = H x + n, detect, and count bit errors until
    min_bit_errors or max_bits.  Deterministic for a fixed config.
    """
    if zm is None:
        from .antenna import reference_fixture

        zm = reference_fixture()
    if cfg is None:
        cfg = BasisConfig(z0=zm.z0)

    n_points = len(config.snr_grid_db)
    root = np.random.SeedSequence(config.seed)
    children = root.spawn(n_points + 1)
    load_rng = np.random.Generator(np.random.PCG64(children[n_points]))

    table = build_transmit_table(
        config.transmitter, config.error_model, zm, cfg, load_rng
    )
    tx_flat = (table * _STREAM_SCALE).reshape(256, 2)

    ideal = GRAY_SYMBOLS * _STREAM_SCALE
    candidates = np.array([(ideal[m1], ideal[m2]) for m1 in range(16) for m2 in range(16)])

    eb = 2.0 / 8.0  # total symbol energy over total bits per channel use
    points = []
    for p_idx, snr_db in enumerate(config.snr_grid_db):
        rng = np.random.Generator(np.random.PCG64(children[p_idx]))
        n0 = eb / (10.0 ** (snr_db / 10.0))
        noise_std = math.sqrt(n0 / 2.0)
        bits = 0
        errors = 0
        while errors < config.min_bit_errors and bits < config.max_bits:
            n = config.batch_size
            labels = rng.integers(0, 16, size=(n, 2))
            flat = labels[:, 0] * 16 + labels[:, 1]
            x = tx_flat[flat]
            h = (rng.standard_normal((n, 2, 2)) + 1j * rng.standard_normal((n, 2, 2))) / math.sqrt(2.0)
            noise = noise_std * (rng.standard_normal((n, 2)) + 1j * rng.standard_normal((n, 2)))
            y = np.einsum("nij,nj->ni", h, x) + noise

            if config.receiver is Receiver.ML:
                det_flat = _ml_detect(y, h, candidates)
                det_labels = np.stack([det_flat // 16, det_flat % 16], axis=1)
            else:
                det_labels = _zf_detect(y, h)

            errors += int(_POPCOUNT[labels ^ det_labels].sum())
            bits += 8 * n
        points.append(
            BerPoint(
                snr_db=snr_db,
                ber=errors / bits if bits else 0.0,
                bits_simulated=bits,
                bit_errors=errors,
            )
        )
    return BerCurve(
        transmitter=config.transmitter,
        receiver=config.receiver,
        seed=config.seed,
        points=tuple(points),
    )


def curve_to_csv(curve: BerCurve) -> str:
    """CSV text with columns snr_db, ber, bits, errors."""
    lines = ["snr_db,ber,bits,errors"]
    for p in curve.points:
        lines.append(
            f"{format_fixed(p.snr_db)},{format_fixed(p.ber)},"
            f"{p.bits_simulated},{p.bit_errors}"
        )
    return "\n".join(lines) + "\n"


def binomial_stderr(ber: float, bits: int) -> float:
    """Standard error of a BER estimate from a bits-long run."""
    if bits <= 0:
        return float("inf")
    return math.sqrt(max(ber * (1.0 - ber), 0.0) / bits)
