"""qsynth: compile arbitrary linear optical transformations, including loss
and gain, into quasiunitary networks of phase shifters, beam splitters, and
two-mode squeezers, then verify the construction by property checks and
few-photon simulation."""

from .blocks import (
    BeamSplitter,
    Circuit,
    Element,
    PhaseShifter,
    TwoModeSqueezer,
    circuit_from_json,
    circuit_smatrix,
    circuit_to_json,
    embed_element,
    lift_gain,
    lift_loss,
    lift_phase,
)
from .closedform2x2 import Params2x2, analytic_circuit, analytic_params, analytic_synthesize
from .mesh import NotUnitaryError, mesh_verify, reck_decompose
from .numkit import (
    SvdFactors,
    g_metric,
    matrix_from_json,
    matrix_to_json,
    quasiunitarity_deviation,
    svd,
    upper_left_block,
)
from .apps import RankOnePovm, cz_gate_target, naimark_extension, povm_probabilities, verify_cz
from .sim import (
    FockState,
    GaussianMoments,
    NotPassiveError,
    coherent_moments,
    evolve_moments,
    fock_evolve,
    passive_block,
    physicality_residual,
    postselect,
    vacuum_moments,
)
from .synth import (
    SingularClassification,
    SynthesisConfig,
    SynthesisError,
    SynthesisResult,
    classify_singulars,
    count_bounds,
    lift_singular,
    lift_unitary_factor,
    pad_factors,
    synthesize,
    verification_report,
)

__version__ = "0.1.0"
