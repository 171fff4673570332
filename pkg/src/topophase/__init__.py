"""Persistent homology of parameterized ground-state expectation clouds.

Pipeline: build a quantum model, map its ground states to points in R^m via
observable expectation values, filter the cloud with a Vietoris-Rips
construction, and read off barcodes, persistent Betti numbers, and persistent
Dirac/Laplacian spectra.  Phase transitions show up as integer jumps in the
probe values across the parameter grid.
"""

from .statecloud import (
    DegenerateGroundStateError,
    InvalidModelError,
    ObservableSet,
    QuantumState,
    SSHChain,
    StateCloud,
    build_cloud,
    build_ssh_hamiltonian,
    bures_distance,
    cloud_csv_text,
    cloud_from_csv,
    cloud_to_csv,
    expectation,
    fidelity,
    ground_state,
    haar_unitary,
    is_hermitian,
    operator_norm,
    phi_map,
    pure_density,
    ssh_observables,
    trace_distance,
)
from .simplicial import (
    BoundaryMatrix,
    FilteredComplex,
    Simplex,
    boundary_matrix,
    complex_at_scale,
    filtration_jsonl,
    vr_filtration,
)
from .persistence import (
    Bar,
    PersistenceDiagram,
    betti_oracle,
    bottleneck,
    diagram_from_json,
    diagram_to_json,
    persistent_betti,
    reduce,
    render_svg,
    render_text,
)
from .dirac import (
    DiracOperator,
    PersistentBoundary,
    betti_from_laplacian,
    dirac_operator,
    persistent_laplacian,
    qpe_distribution,
    restricted_boundary,
    spectrum,
    spectrum_to_json,
)
from .phase import (
    ConsistencyError,
    PhaseScanReport,
    ScanConfig,
    continuity_check,
    detect_transitions,
    probe_key,
    report_from_json,
    report_to_json,
    spectral_discontinuity,
    sweep,
    unitary_conjugate_scan,
)

__version__ = "0.1.0"

__all__ = [
    "Bar",
    "BoundaryMatrix",
    "ConsistencyError",
    "DegenerateGroundStateError",
    "DiracOperator",
    "FilteredComplex",
    "InvalidModelError",
    "ObservableSet",
    "PersistenceDiagram",
    "PersistentBoundary",
    "PhaseScanReport",
    "QuantumState",
    "SSHChain",
    "ScanConfig",
    "Simplex",
    "StateCloud",
    "betti_from_laplacian",
    "betti_oracle",
    "bottleneck",
    "boundary_matrix",
    "build_cloud",
    "build_ssh_hamiltonian",
    "bures_distance",
    "cloud_csv_text",
    "cloud_from_csv",
    "cloud_to_csv",
    "complex_at_scale",
    "continuity_check",
    "detect_transitions",
    "diagram_from_json",
    "diagram_to_json",
    "dirac_operator",
    "expectation",
    "fidelity",
    "filtration_jsonl",
    "ground_state",
    "haar_unitary",
    "is_hermitian",
    "operator_norm",
    "persistent_betti",
    "persistent_laplacian",
    "phi_map",
    "probe_key",
    "pure_density",
    "qpe_distribution",
    "reduce",
    "render_svg",
    "render_text",
    "report_from_json",
    "report_to_json",
    "restricted_boundary",
    "spectral_discontinuity",
    "spectrum",
    "spectrum_to_json",
    "ssh_observables",
    "sweep",
    "trace_distance",
    "unitary_conjugate_scan",
    "vr_filtration",
]
