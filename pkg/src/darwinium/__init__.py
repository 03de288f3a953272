"""darwinium: branching-state simulation and information analysis toolkit.

Simulates conditional system-environment circuits on a dense state vector,
computes mutual information / Holevo bound / quantum discord for environment
fragments, checks the simulator against a closed-form oracle, and ships
experiment drivers with deterministic seeding, noise channels, shot-based
tomography, geometric branching analysis and a classicality witness.
"""
from .density import DensityMatrix, partial_trace, subsystem_entropy, von_neumann_entropy
from .errors import (
    ConfigurationError,
    DarwiniumError,
    DegenerateInputError,
    ValidationError,
)
from .experiments import (
    EXPERIMENTS,
    ExperimentConfig,
    default_config,
    run_experiment,
    run_oracle_check,
)
from .geometry import (
    GeometricEnsemble,
    GeometricEntry,
    PointerBasis,
    fragment_ensemble,
    geometric_decomposition,
    integrated_probability,
)
from .info import (
    DiscordResult,
    FragmentPartition,
    HolevoOptions,
    HolevoResult,
    InfoCurve,
    MeasurementBasis,
    holevo_bound,
    mutual_information,
    quantum_discord,
)
from .models import (
    MODEL_LOGICAL_PAIR,
    MODEL_SCRAMBLED,
    MODEL_SINGLE,
    BranchingModelConfig,
    build_circuit,
)
from .noise import NINE_QUBIT_NOISE, TWELVE_QUBIT_NOISE, KrausSet, NoiseParams
from .oracle import closed_form_mi, record_overlap
from .statevec import Circuit, StateVector, init_state, run_circuit
from .tomography import (
    ShotRecord,
    TomographySetting,
    enumerate_settings,
    psd_project,
    reconstruct_density,
    sample_measurements,
)
from .witness import WitnessObservable, default_witness, expectation, witness_sweep

__version__ = "0.1.0"

__all__ = [
    "BranchingModelConfig",
    "Circuit",
    "ConfigurationError",
    "DarwiniumError",
    "DegenerateInputError",
    "DensityMatrix",
    "DiscordResult",
    "EXPERIMENTS",
    "ExperimentConfig",
    "FragmentPartition",
    "GeometricEnsemble",
    "GeometricEntry",
    "HolevoOptions",
    "HolevoResult",
    "InfoCurve",
    "KrausSet",
    "MODEL_LOGICAL_PAIR",
    "MODEL_SCRAMBLED",
    "MODEL_SINGLE",
    "MeasurementBasis",
    "NINE_QUBIT_NOISE",
    "NoiseParams",
    "PointerBasis",
    "ShotRecord",
    "StateVector",
    "TWELVE_QUBIT_NOISE",
    "TomographySetting",
    "ValidationError",
    "WitnessObservable",
    "closed_form_mi",
    "default_config",
    "default_witness",
    "enumerate_settings",
    "expectation",
    "fragment_ensemble",
    "geometric_decomposition",
    "holevo_bound",
    "init_state",
    "integrated_probability",
    "mutual_information",
    "partial_trace",
    "psd_project",
    "quantum_discord",
    "reconstruct_density",
    "record_overlap",
    "run_circuit",
    "run_experiment",
    "run_oracle_check",
    "sample_measurements",
    "subsystem_entropy",
    "von_neumann_entropy",
    "witness_sweep",
]
