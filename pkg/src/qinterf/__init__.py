"""Interference properties of quantum channels.

Simulates a Mach-Zehnder interferometer with a channel in each arm and
computes the resulting coherence measures: coherent fidelity and relative
phase, self-visibility and its maximum over Kraus decompositions, the
closest unitary, the maximum coherent fidelity of two channels, and the
Uhlmann fidelity of their Choi states.
"""

__version__ = "0.1.0"

from .channels import (
    ChoiState,
    DensityMatrix,
    KrausChannel,
    StinespringDilation,
    apply,
    choi_to_kraus,
    dilate,
    kraus_to_choi,
    orthogonalize,
    random_channel,
    remix,
    validate,
)
from .coherence import (
    closest_unitary,
    coherent_fidelity,
    max_coherent_fidelity,
    max_self_coherence,
    raginsky_fidelity,
    self_visibility,
)
from .interferometer import (
    InterferencePattern,
    VisibilityEstimate,
    complex_visibility,
    extract_visibility,
    simulate_pattern,
    simulate_pattern_dilated,
    unitary_distance,
)
