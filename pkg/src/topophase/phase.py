"""Parameter sweeps: per-lambda clouds, Betti/spectral probes, transitions.

A sweep builds the expectation cloud over a lambda grid, forms one Vietoris-
Rips filtration per lambda (a sliding window of neighboring sweep points, or
one global cloud), evaluates every probe interval both by barcode counting
and by persistent-Laplacian kernel dimension, and reports each adjacent
lambda pair where any probe value changes.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dirac as _dirac
from . import persistence as _persistence
from .simplicial import vr_filtration
from .statecloud import (
    DEFAULT_GAP_TOL,
    SSHChain,
    build_cloud,
    haar_unitary,
    ssh_observables,
)

WINDOW = "window"
GLOBAL = "global"


class ConsistencyError(RuntimeError):
    """Barcode and spectral detectors disagree; the report is defective."""


def probe_key(k: int, eps1: float, eps2: float) -> str:
    return f"k{k}_{eps1:g}_{eps2:g}"


@dataclass(frozen=True)
class ScanConfig:
    """Sweep definition: model, lambda grid, windowing, and probe intervals."""

    lambda_min: float
    lambda_max: float
    step: float
    model: str = "ssh"
    n_sites: int = 4
    v: float = 1.0
    w: float = 1.0
    cloud_mode: str = WINDOW
    window_halfwidth: int = 3
    intervals: tuple = ((1, 0.4, 0.8),)
    max_dim: int = 2
    xi: float = 0.0
    rank_tol: float = 1e-9
    gap_tol: float = DEFAULT_GAP_TOL
    jobs: int = 1
    keep_diagrams: bool = False
    keep_spectra: bool = False

    def __post_init__(self):
        if self.model != "ssh":
            raise ValueError(f"unknown model {self.model!r}")
        if not self.lambda_min <= self.lambda_max:
            raise ValueError("lambda_min must not exceed lambda_max")
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.cloud_mode not in (WINDOW, GLOBAL):
            raise ValueError(f"cloud_mode must be {WINDOW!r} or {GLOBAL!r}")
        if self.window_halfwidth < 0:
            raise ValueError("window_halfwidth must be >= 0")
        if self.max_dim < 0:
            raise ValueError("max_dim must be >= 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        intervals = tuple((int(k), float(e1), float(e2)) for k, e1, e2 in self.intervals)
        if not intervals:
            raise ValueError("at least one probe interval is required")
        for k, e1, e2 in intervals:
            if k < 0:
                raise ValueError("probe dimension must be >= 0")
            if e1 > e2:
                raise ValueError(f"probe interval has eps1 > eps2: ({k}, {e1}, {e2})")
        object.__setattr__(self, "intervals", intervals)

    def lambdas(self) -> np.ndarray:
        span = self.lambda_max - self.lambda_min
        n_steps = int(round(span / self.step))
        if abs(self.lambda_min + n_steps * self.step - self.lambda_max) > 1e-9 * self.step:
            n_steps = int(np.floor(span / self.step + 1e-12))
        if n_steps == 0:
            return np.array([self.lambda_min])
        grid = np.linspace(self.lambda_min, self.lambda_min + n_steps * self.step, n_steps + 1)
        return np.round(grid, 12) + 0.0  # kill accumulated fp noise; -0.0 -> 0.0

    def probe_keys(self) -> list:
        return [probe_key(*probe) for probe in self.intervals]


@dataclass(frozen=True)
class PhaseScanReport:
    """Per-lambda probe values plus the detected transition brackets.

    ``betti`` and ``kernel_dims`` hold one dict per entry (probe key -> int);
    in window mode entries align with ``lambdas``, in global mode there is a
    single entry for the whole sweep.  ``diagrams`` and ``spectra`` are kept
    in memory only when the config asks for them.
    """

    config: ScanConfig
    lambdas: tuple
    betti: tuple
    kernel_dims: tuple
    transitions: tuple
    diagrams: tuple | None = None
    spectra: tuple | None = None

    def entry_lambdas(self) -> tuple:
        return self.lambdas if self.config.cloud_mode == WINDOW else (None,)


def _window_bounds(center: int, halfwidth: int, n: int) -> tuple:
    lo = max(0, center - halfwidth)
    hi = min(n, center + halfwidth + 1)
    return lo, hi


def _probe_cloud(points: np.ndarray, config: ScanConfig):
    """Filtration, barcode, and per-probe detector values for one cloud."""
    filtration = vr_filtration(points, eps_max=None, max_dim=config.max_dim)
    diagram = _persistence.reduce(filtration)
    betti = {}
    kernels = {}
    spectra = {} if config.keep_spectra else None
    for k, e1, e2 in config.intervals:
        key = probe_key(k, e1, e2)
        betti[key] = _persistence.persistent_betti(diagram, k, e1, e2)
        lap = _dirac.persistent_laplacian(filtration, k, e1, e2)
        kernels[key] = _dirac.betti_from_laplacian(lap, rank_tol=config.rank_tol)
        if spectra is not None:
            op = _dirac.dirac_operator(filtration, k, e1, e2, xi=config.xi)
            spectra[key] = [float(x) for x in _dirac.spectrum(op.matrix)]
    return betti, kernels, diagram, spectra


def _detect(lambdas, betti_dicts, keys):
    transitions = []
    for i in range(len(betti_dicts) - 1):
        changed = tuple(key for key in keys if betti_dicts[i][key] != betti_dicts[i + 1][key])
        if changed:
            transitions.append((float(lambdas[i]), float(lambdas[i + 1]), changed))
    return tuple(transitions)


def sweep(config: ScanConfig, unitary=None) -> PhaseScanReport:
    """Run the scan; raises naming the offending lambda on degeneracy.

    Windows at the sweep boundaries are truncated, not dropped, so endpoint
    lambdas keep comparable entries across runs.  Every probe is evaluated by
    both detectors and any barcode/kernel disagreement raises
    ``ConsistencyError`` instead of entering the report.
    """
    model = SSHChain(n_sites=config.n_sites, v=config.v, w=config.w)
    observables = ssh_observables(config.n_sites)
    if unitary is not None:
        observables = observables.conjugated(unitary)
    lambdas = config.lambdas()
    cloud = build_cloud(lambdas, model, observables, gap_tol=config.gap_tol, unitary=unitary)

    if config.cloud_mode == GLOBAL:
        jobs_points = [cloud.points]
        entry_lambdas = [None]
    else:
        n = cloud.n_points
        jobs_points = []
        for i in range(n):
            lo, hi = _window_bounds(i, config.window_halfwidth, n)
            jobs_points.append(cloud.points[lo:hi])
        entry_lambdas = [float(x) for x in lambdas]

    if config.jobs > 1 and len(jobs_points) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(lambda pts: _probe_cloud(pts, config), jobs_points))
    else:
        results = [_probe_cloud(pts, config) for pts in jobs_points]

    betti = tuple(r[0] for r in results)
    kernels = tuple(r[1] for r in results)
    for lam, b, kd in zip(entry_lambdas, betti, kernels):
        for key in config.probe_keys():
            if b[key] != kd[key]:
                raise ConsistencyError(
                    f"barcode/spectral disagreement at lambda={lam!r}, probe {key}: "
                    f"persistent Betti {b[key]} vs Laplacian kernel {kd[key]}"
                )
    transitions = _detect(entry_lambdas, betti, config.probe_keys())
    return PhaseScanReport(
        config=config,
        lambdas=tuple(float(x) for x in lambdas),
        betti=betti,
        kernel_dims=kernels,
        transitions=transitions,
        diagrams=tuple(r[2] for r in results) if config.keep_diagrams else None,
        spectra=tuple(r[3] for r in results) if config.keep_spectra else None,
    )


def detect_transitions(report: PhaseScanReport) -> list:
    """Adjacent lambda pairs whose Betti vector differs in any probe."""
    lams = report.entry_lambdas()
    keys = report.config.probe_keys()
    out = []
    for i in range(len(report.betti) - 1):
        if any(report.betti[i][key] != report.betti[i + 1][key] for key in keys):
            out.append((lams[i], lams[i + 1]))
    return out


def spectral_discontinuity(report: PhaseScanReport) -> list:
    """Adjacent lambda pairs where a Laplacian kernel dimension jumps.

    Refuses (``ConsistencyError``) if the report's barcode and kernel values
    disagree anywhere: the two detectors must be interchangeable.
    """
    keys = report.config.probe_keys()
    lams = report.entry_lambdas()
    for lam, b, kd in zip(lams, report.betti, report.kernel_dims):
        for key in keys:
            if b[key] != kd[key]:
                raise ConsistencyError(
                    f"report defect at lambda={lam!r}, probe {key}: "
                    f"Betti {b[key]} != kernel dim {kd[key]}"
                )
    out = []
    for i in range(len(report.kernel_dims) - 1):
        if any(report.kernel_dims[i][key] != report.kernel_dims[i + 1][key] for key in keys):
            out.append((lams[i], lams[i + 1]))
    return out


def continuity_check(report: PhaseScanReport, exclude=None) -> bool:
    """True when Betti vectors are constant on each side of ``exclude``.

    ``exclude`` is an open lambda interval (lo, hi) or None to require a
    globally constant report.
    """
    lams = report.entry_lambdas()
    if exclude is None:
        groups = [list(range(len(report.betti)))]
    else:
        lo, hi = exclude
        left = [i for i, lam in enumerate(lams) if lam is not None and lam <= lo]
        right = [i for i, lam in enumerate(lams) if lam is not None and lam >= hi]
        groups = [left, right]
    for group in groups:
        if len(group) < 2:
            continue
        first = report.betti[group[0]]
        if any(report.betti[i] != first for i in group[1:]):
            return False
    return True


def unitary_conjugate_scan(config: ScanConfig, seed) -> PhaseScanReport:
    """Sweep with states U psi and observables U O U^dagger for a seeded U."""
    u = haar_unitary(config.n_sites, seed)
    return sweep(config, unitary=u)


# -- report serialization ------------------------------------------------------

def _config_to_dict(config: ScanConfig) -> dict:
    return {
        "model": config.model,
        "n_sites": config.n_sites,
        "v": config.v,
        "w": config.w,
        "lambda_min": config.lambda_min,
        "lambda_max": config.lambda_max,
        "step": config.step,
        "cloud_mode": config.cloud_mode,
        "window_halfwidth": config.window_halfwidth,
        "intervals": [list(probe) for probe in config.intervals],
        "max_dim": config.max_dim,
        "xi": config.xi,
        "rank_tol": config.rank_tol,
        "gap_tol": config.gap_tol,
    }


def config_from_dict(payload: dict) -> ScanConfig:
    known = {
        "model", "n_sites", "v", "w", "lambda_min", "lambda_max", "step",
        "cloud_mode", "window_halfwidth", "intervals", "max_dim", "xi",
        "rank_tol", "gap_tol", "jobs", "keep_diagrams", "keep_spectra",
    }
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ValueError(f"unknown config field {unknown[0]!r}")
    for required in ("lambda_min", "lambda_max", "step"):
        if required not in payload:
            raise ValueError(f"missing config field {required!r}")
    payload = dict(payload)
    if "intervals" in payload:
        payload["intervals"] = tuple(tuple(x) for x in payload["intervals"])
    return ScanConfig(**payload)


def report_to_json(report: PhaseScanReport) -> str:
    entries = []
    for lam, b, kd in zip(report.entry_lambdas(), report.betti, report.kernel_dims):
        entries.append({
            "lambda": lam,
            "betti": dict(sorted(b.items())),
            "kernel_dims": dict(sorted(kd.items())),
        })
    payload = {
        "config": _config_to_dict(report.config),
        "entries": entries,
        "transitions": [
            {"left": left, "right": right, "probes": list(probes)}
            for left, right, probes in report.transitions
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def report_from_json(text: str) -> PhaseScanReport:
    payload = json.loads(text)
    config = config_from_dict(payload["config"])
    entries = payload["entries"]
    lambdas = tuple(e["lambda"] for e in entries if e["lambda"] is not None)
    if config.cloud_mode == GLOBAL:
        lambdas = tuple(float(x) for x in config.lambdas())
    betti = tuple({k: int(v) for k, v in e["betti"].items()} for e in entries)
    kernels = tuple({k: int(v) for k, v in e["kernel_dims"].items()} for e in entries)
    transitions = tuple(
        (t["left"], t["right"], tuple(t["probes"])) for t in payload["transitions"]
    )
    return PhaseScanReport(
        config=config,
        lambdas=lambdas,
        betti=betti,
        kernel_dims=kernels,
        transitions=transitions,
    )
