"""Tight-binding chains, ground states, and observable-expectation point clouds.

A parameterized Hamiltonian family is mapped to a cloud of points in R^m by
evaluating a fixed set of Hermitian observables in the ground state at each
parameter value.  The resulting ``StateCloud`` is the geometric input for the
filtration / persistence machinery in the sibling modules.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

HERMITICITY_TOL = 1e-12
DEFAULT_GAP_TOL = 1e-9
EXPECTATION_IMAG_TOL = 1e-12
DENSITY_TOL = 1e-9

_GAUGE_CUTOFF = 1e-10


class InvalidModelError(ValueError):
    """Model parameters that do not define a valid chain."""


class DegenerateGroundStateError(ValueError):
    """Two lowest eigenvalues closer than the configured gap tolerance."""

    def __init__(self, gap: float, tol: float, lam: float | None = None):
        self.gap = gap
        self.tol = tol
        self.lam = lam
        where = "" if lam is None else f" at lambda={lam:.10g}"
        super().__init__(
            f"degenerate ground state{where}: gap {gap:.3e} below tolerance {tol:.3e}"
        )


def is_hermitian(matrix, tol: float = HERMITICITY_TOL) -> bool:
    """True when ``matrix`` equals its conjugate transpose within ``tol``."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return float(np.max(np.abs(a - a.conj().T))) <= tol if a.size else True


def _require_hermitian(matrix, name: str = "matrix") -> np.ndarray:
    a = np.asarray(matrix)
    if not is_hermitian(a):
        raise ValueError(f"{name} is not Hermitian within {HERMITICITY_TOL:g}")
    return a


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized pure state with the energy of the eigenpair it came from."""

    amplitudes: np.ndarray
    energy: float

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size == 0:
            raise ValueError("amplitudes must be a non-empty vector")
        norm_sq = float(np.sum(np.abs(amp) ** 2))
        if abs(norm_sq - 1.0) > 1e-12:
            raise ValueError(f"state not normalized: sum |a_i|^2 = {norm_sq!r}")
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]


@dataclass(frozen=True, eq=False)
class ObservableSet:
    """Labelled family of same-dimension Hermitian observables."""

    matrices: tuple
    labels: tuple

    def __post_init__(self):
        mats = tuple(np.asarray(m) for m in self.matrices)
        labels = tuple(str(s) for s in self.labels)
        if not mats:
            raise ValueError("observable set is empty")
        if len(mats) != len(labels):
            raise ValueError("labels and matrices differ in length")
        dim = mats[0].shape[0]
        for label, m in zip(labels, mats):
            if m.shape != (dim, dim):
                raise ValueError(f"observable {label!r} has shape {m.shape}, expected ({dim}, {dim})")
            _require_hermitian(m, f"observable {label!r}")
        frozen = []
        for m in mats:
            m = m.copy()
            m.flags.writeable = False
            frozen.append(m)
        object.__setattr__(self, "matrices", tuple(frozen))
        object.__setattr__(self, "labels", labels)

    @property
    def dim(self) -> int:
        return self.matrices[0].shape[0]

    def __len__(self) -> int:
        return len(self.matrices)

    def operator_norms(self) -> np.ndarray:
        return np.array([operator_norm(m) for m in self.matrices])

    def normalized(self) -> "ObservableSet":
        """Each observable divided by its operator norm (unit spectral radius)."""
        norms = self.operator_norms()
        if np.any(norms == 0.0):
            raise ValueError("cannot normalize a zero observable")
        return ObservableSet(tuple(m / s for m, s in zip(self.matrices, norms)), self.labels)

    def conjugated(self, unitary) -> "ObservableSet":
        """The set {U O U^dagger} under a fixed unitary U."""
        u = np.asarray(unitary, dtype=complex)
        return ObservableSet(tuple(u @ m @ u.conj().T for m in self.matrices), self.labels)


@dataclass(frozen=True, eq=False)
class StateCloud:
    """Ordered points in R^m, one per parameter value, tagged with labels."""

    points: np.ndarray
    params: np.ndarray
    labels: tuple

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        par = np.asarray(self.params, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("points must be a non-empty (n, m) array")
        if par.shape != (pts.shape[0],):
            raise ValueError("params length must match the number of points")
        if np.any(np.diff(par) <= 0):
            raise ValueError("params must be strictly increasing")
        labels = tuple(str(s) for s in self.labels)
        if len(labels) != pts.shape[1]:
            raise ValueError("one label per point coordinate is required")
        pts.flags.writeable = False
        par.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "params", par)
        object.__setattr__(self, "labels", labels)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.points.shape[1]

    def distance_matrix(self) -> np.ndarray:
        diff = self.points[:, None, :] - self.points[None, :, :]
        d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        d = 0.5 * (d + d.T)
        np.fill_diagonal(d, 0.0)
        return d


@dataclass(frozen=True)
class SSHChain:
    """Open chain with staggered nearest-neighbor hopping v + (-1)^i * lambda * w."""

    n_sites: int = 4
    v: float = 1.0
    w: float = 1.0

    def __post_init__(self):
        if self.n_sites < 2:
            raise InvalidModelError(f"n_sites must be >= 2, got {self.n_sites}")

    def hamiltonian(self, lam: float) -> np.ndarray:
        return build_ssh_hamiltonian(lam, self.v, self.w, self.n_sites)

    def observables(self) -> ObservableSet:
        return ssh_observables(self.n_sites)


def build_ssh_hamiltonian(lam: float, v: float = 1.0, w: float = 1.0, n_sites: int = 4) -> np.ndarray:
    """Single-particle matrix of the staggered-hopping open chain.

    Bond (i, i+1), with sites counted from 1, carries amplitude
    ``v + (-1)**i * lam * w``.  The result is real symmetric tridiagonal.
    """
    if n_sites < 2:
        raise InvalidModelError(f"n_sites must be >= 2, got {n_sites}")
    h = np.zeros((n_sites, n_sites))
    for i in range(1, n_sites):
        amp = v + (-1) ** i * lam * w
        h[i - 1, i] = h[i, i - 1] = amp
    return h


def ground_state(hamiltonian, gap_tol: float = DEFAULT_GAP_TOL) -> QuantumState:
    """Lowest eigenpair of a Hermitian matrix, gauge-fixed and normalized.

    The gauge makes the first amplitude of magnitude above 1e-10 positive
    real, so the output is unique (and bit-reproducible) for a gapped input.

    Raises
    ------
    DegenerateGroundStateError
        If the two smallest eigenvalues are within ``gap_tol``.
    """
    h = _require_hermitian(hamiltonian, "hamiltonian")
    evals, evecs = np.linalg.eigh(h)
    if h.shape[0] >= 2:
        gap = float(evals[1] - evals[0])
        if gap < gap_tol:
            raise DegenerateGroundStateError(gap, gap_tol)
    vec = np.asarray(evecs[:, 0], dtype=complex)
    vec = vec / np.linalg.norm(vec)
    for c in vec:
        if abs(c) > _GAUGE_CUTOFF:
            vec = vec * (abs(c) / c)
            break
    return QuantumState(vec, float(evals[0]))


def ssh_observables(n_sites: int = 4) -> ObservableSet:
    """Site densities plus real/imaginary nearest-neighbor correlation parts.

    Ordering: the ``n`` densities first, then for each bond (i, i+1) the real
    part ``c_i^+ c_j + c_j^+ c_i`` followed by the imaginary part
    ``i (c_i^+ c_j - c_j^+ c_i)``; ``n`` densities + 2(n-1) correlations total.
    """
    if n_sites < 2:
        raise InvalidModelError(f"n_sites must be >= 2, got {n_sites}")
    mats = []
    labels = []
    for i in range(n_sites):
        m = np.zeros((n_sites, n_sites), dtype=complex)
        m[i, i] = 1.0
        mats.append(m)
        labels.append(f"n{i + 1}")
    for i in range(n_sites - 1):
        re = np.zeros((n_sites, n_sites), dtype=complex)
        re[i, i + 1] = re[i + 1, i] = 1.0
        im = np.zeros((n_sites, n_sites), dtype=complex)
        im[i, i + 1] = 1.0j
        im[i + 1, i] = -1.0j
        mats.append(re)
        labels.append(f"re{i + 1}_{i + 2}")
        mats.append(im)
        labels.append(f"im{i + 1}_{i + 2}")
    return ObservableSet(tuple(mats), tuple(labels))


def expectation(state: QuantumState, observable) -> float:
    """Real expectation value <psi|O|psi>; rejects a large imaginary residue."""
    o = np.asarray(observable)
    if o.ndim != 2 or o.shape != (state.dim, state.dim):
        raise ValueError(f"observable shape {o.shape} does not match state dimension {state.dim}")
    val = complex(np.vdot(state.amplitudes, o @ state.amplitudes))
    if abs(val.imag) >= EXPECTATION_IMAG_TOL:
        raise ValueError(f"expectation value has imaginary residue {val.imag:.3e}; observable not Hermitian enough")
    return float(val.real)


def phi_map(state: QuantumState, observables: ObservableSet) -> np.ndarray:
    """Point in R^m whose i-th coordinate is the i-th observable expectation."""
    return np.array([expectation(state, o) for o in observables.matrices])


def build_cloud(lambdas, model: SSHChain, observables: ObservableSet,
                gap_tol: float = DEFAULT_GAP_TOL, unitary=None) -> StateCloud:
    """One expectation-vector point per parameter value, in sweep order.

    ``unitary`` optionally replaces every ground state psi by U psi; pair it
    with ``observables.conjugated(U)`` to realize a conjugated frame.

    Raises
    ------
    DegenerateGroundStateError
        Naming the offending lambda when any ground state is degenerate.
    """
    lams = np.asarray(lambdas, dtype=float)
    if lams.ndim != 1 or lams.size == 0:
        raise ValueError("lambdas must be a non-empty 1-d sequence")
    if np.any(np.diff(lams) <= 0):
        raise ValueError("lambdas must be strictly increasing")
    u = None if unitary is None else np.asarray(unitary, dtype=complex)
    points = np.empty((lams.size, len(observables)))
    for row, lam in enumerate(lams):
        try:
            state = ground_state(model.hamiltonian(lam), gap_tol=gap_tol)
        except DegenerateGroundStateError as err:
            raise DegenerateGroundStateError(err.gap, err.tol, lam=float(lam)) from None
        if u is not None:
            state = QuantumState(u @ state.amplitudes, state.energy)
        points[row] = phi_map(state, observables)
    return StateCloud(points, lams, observables.labels)


def _require_density(rho, name: str) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    if not is_hermitian(r, tol=DENSITY_TOL):
        raise ValueError(f"{name} is not Hermitian within {DENSITY_TOL:g}")
    tr = complex(np.trace(r))
    if abs(tr - 1.0) > DENSITY_TOL:
        raise ValueError(f"{name} has trace {tr!r}, expected 1")
    evals = np.linalg.eigvalsh(r)
    if float(evals[0]) < -DENSITY_TOL:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {evals[0]:.3e})")
    return r


def pure_density(amplitudes) -> np.ndarray:
    """Rank-one density matrix |psi><psi| of a normalized amplitude vector."""
    a = np.asarray(amplitudes, dtype=complex)
    return np.outer(a, a.conj())


def trace_distance(rho1, rho2) -> float:
    """Half the trace norm of rho1 - rho2; equals sqrt(1 - F) for pure states."""
    r1 = _require_density(rho1, "rho1")
    r2 = _require_density(rho2, "rho2")
    if r1.shape != r2.shape:
        raise ValueError("density matrices differ in dimension")
    evals = np.linalg.eigvalsh(r1 - r2)
    return float(0.5 * np.sum(np.abs(evals)))


def fidelity(rho1, rho2) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)))^2."""
    r1 = _require_density(rho1, "rho1")
    r2 = _require_density(rho2, "rho2")
    if r1.shape != r2.shape:
        raise ValueError("density matrices differ in dimension")
    w, v = np.linalg.eigh(r1)
    sqrt1 = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    inner = np.linalg.eigvalsh(sqrt1 @ r2 @ sqrt1)
    return float(np.sum(np.sqrt(np.clip(inner, 0.0, None))) ** 2)


def bures_distance(rho1, rho2) -> float:
    """sqrt(2 - 2 sqrt(F)) with F the fidelity; sqrt(2) for orthogonal pures."""
    f = fidelity(rho1, rho2)
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * np.sqrt(min(1.0, f)))))


def operator_norm(observable) -> float:
    """Largest absolute eigenvalue of a Hermitian operator."""
    o = _require_hermitian(observable, "observable")
    if o.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(o))))


def haar_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary from a seeded generator (QR with phase fix)."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def cloud_csv_text(cloud: StateCloud) -> str:
    """``lambda,<label_1>,...,<label_m>`` rows at full double precision."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["lambda", *cloud.labels])
    for lam, point in zip(cloud.params, cloud.points):
        writer.writerow([f"{lam:.17g}", *[f"{x:.17g}" for x in point]])
    return buf.getvalue()


def cloud_to_csv(cloud: StateCloud, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(cloud_csv_text(cloud))


def cloud_from_csv(path) -> StateCloud:
    """Parse a cloud CSV; malformed rows are reported with their row number."""
    with open(path, "r", newline="") as fh:
        reader = csv.reader(fh)
        rows = [row for row in reader if row]
    if not rows:
        raise ValueError("empty cloud CSV: missing header")
    header = rows[0]
    if len(header) < 2 or header[0] != "lambda":
        raise ValueError("row 1: header must be 'lambda,<label_1>,...'")
    labels = tuple(header[1:])
    if len(rows) < 2:
        raise ValueError("empty cloud CSV: no data rows")
    params = []
    points = []
    for idx, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ValueError(f"row {idx}: expected {len(header)} fields, got {len(row)}")
        try:
            values = [float(x) for x in row]
        except ValueError:
            raise ValueError(f"row {idx}: non-numeric field") from None
        params.append(values[0])
        points.append(values[1:])
    return StateCloud(np.array(points), np.array(params), labels)
