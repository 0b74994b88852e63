"""Load synthesis and link simulation for a single-RF load-modulated
two-element antenna array.

The package solves, per transmitted symbol pair, the three tunable
reactances of each element's load modulator such that the array feed
stays perfectly matched at a fixed-phase feed voltage, verifies every
solution with an independent circuit solve, and evaluates link-level
BER against a conventional two-chain MIMO transmitter.
"""

from .antenna import AntennaZMatrix, reference_fixture
from .beamspace import (
    QAM16,
    BasisConfig,
    SymbolPair,
    bessel_j0,
    currents_from_symbols,
    feeding_voltage,
    power_norm_factor,
    radiated_power,
    target_radiated_power,
)
from .calibration import CalibrationReport, calibrate, enumerate_pairs
from .linksim import (
    BerConfig,
    BerCurve,
    BerPoint,
    LoadErrorKind,
    LoadErrorModel,
    Receiver,
    Transmitter,
    effective_symbols,
    run_ber,
)
from .oracle import OracleSolution, VerificationReport, solve_network, verify
from .synthesis import (
    DriveTerms,
    SynthesisResult,
    compute_drive_terms,
    input_power,
    procedure1_solve,
    solve_ab,
    solve_c,
    synthesize,
    target_theta,
)
from .twoport import (
    NormalizedABCD,
    ReactanceTuple,
    Topology,
    abcd_from_pi_no_tl,
    abcd_from_reactances,
    abcd_from_t_with_tl,
    complete_d,
    propagate,
    reactances_from_abcd,
)

__version__ = "0.1.0"

__all__ = [
    "AntennaZMatrix",
    "BasisConfig",
    "BerConfig",
    "BerCurve",
    "BerPoint",
    "CalibrationReport",
    "DriveTerms",
    "LoadErrorKind",
    "LoadErrorModel",
    "NormalizedABCD",
    "OracleSolution",
    "QAM16",
    "ReactanceTuple",
    "Receiver",
    "SymbolPair",
    "SynthesisResult",
    "Topology",
    "Transmitter",
    "VerificationReport",
    "abcd_from_pi_no_tl",
    "abcd_from_reactances",
    "abcd_from_t_with_tl",
    "bessel_j0",
    "calibrate",
    "complete_d",
    "compute_drive_terms",
    "currents_from_symbols",
    "effective_symbols",
    "enumerate_pairs",
    "feeding_voltage",
    "input_power",
    "power_norm_factor",
    "procedure1_solve",
    "propagate",
    "radiated_power",
    "reactances_from_abcd",
    "reference_fixture",
    "run_ber",
    "solve_ab",
    "solve_c",
    "solve_network",
    "synthesize",
    "target_radiated_power",
    "target_theta",
    "verify",
]
