"""Invariant-based anisotropic hyperelastic material kernel."""
from .errors import (
    IncompressibilityViolation,
    InvalidPair,
    InvalidTable,
    LogDomain,
    MissingParameter,
    MissingPressure,
    NoConvergence,
    NonPositiveJacobian,
    NonPositiveModulus,
    ParseError,
    StepFailure,
    UmatError,
    UnknownInvariantSlot,
    UnknownPreset,
)
from .kinematics import (
    DeformationState,
    FiberSet,
    InvariantState,
    MixedInvariantRow,
    compute_invariants,
    invariant_gradients,
    invariant_index,
    make_deformation_state,
)
from .table import MaterialType, NeuronRow, ParameterTable
from .energy_net import EnergyEvaluation, evaluate_energy, ucann_neuron
from .stress_tangent import StressState, TangentState, cauchy_stress, energy, stress_from_energy, tangent_fd
from .input_deck import MaterialSpec, parse_deck, serialize_deck
from .presets import build_preset, list_presets, preset_info
from .point_driver import CurvePoint, LoadPath, emit_csv, run_path

__version__ = "0.1.0"
