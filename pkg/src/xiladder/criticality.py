"""Fidelity diagnostics, ground-state phase diagrams, and triple points.

Ground states in different M sectors are exactly orthogonal, so the fidelity
between neighboring parameter points drops to zero across a separatrix and
the susceptibility chi = 2(1-F)/dlam^2 diverges there.  The phase diagram is
built by labeling every grid node with the winning sector of the global
ground-state scan; junctions where three (or more) regions meet are refined
by shrinking-window search on the spread of the competing sector minima,
which handles arbitrarily thin region wedges that corner-label subdivision
misses.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import IncompleteScanError, InvalidParameterError, InvalidStateError
from .hamiltonian import sector_coupling_blocks
from .params import ModelParams
from .spectra import MmaxPolicy, SectorState, global_ground, scan_sector_minima

# ---------------------------------------------------------------------------
# fidelity and susceptibility


def fidelity(state_a: SectorState, state_b: SectorState) -> float:
    """Squared overlap of two sector states; exactly 0 across different sectors."""
    for state in (state_a, state_b):
        norm = float(np.linalg.norm(state.vector))
        if abs(norm - 1.0) > 1e-8:
            raise InvalidStateError(f"state in sector M={state.m} is not normalized (|v|={norm})")
    if state_a.m != state_b.m:
        return 0.0
    overlap = float(np.dot(state_a.vector, state_b.vector))
    return min(overlap * overlap, 1.0)


def susceptibility(f: float, dlam: float) -> float:
    """chi = 2 (1 - F) / dlam^2."""
    if dlam <= 0:
        raise InvalidParameterError(f"parameter step must be positive, got {dlam}")
    if not 0.0 <= f <= 1.0:
        raise InvalidParameterError(f"fidelity must lie in [0, 1], got {f}")
    return 2.0 * (1.0 - f) / (dlam * dlam)


# ---------------------------------------------------------------------------
# 1D sweeps


@dataclass(frozen=True)
class SweepSample:
    """One sweep point; fidelity/chi refer to the step towards the next point."""

    lam: float
    mu12: float
    mu23: float
    winning_m: int
    energy: float
    fidelity_to_next: float | None
    chi: float | None


@dataclass(frozen=True)
class SweepTrace:
    """Samples of a parameterized line lam -> (mu12, mu23) through coupling space."""

    description: str
    dlam: float
    samples: tuple
    params_base: ModelParams
    path: Callable[[float], tuple[float, float]]
    policy: MmaxPolicy


@dataclass(frozen=True)
class TransitionReport:
    """Refined separatrix crossings plus chi peaks away from label changes."""

    crossings: tuple
    chi_peaks: tuple


def offset_path(offset: float) -> Callable[[float], tuple[float, float]]:
    """Path lam -> (mu12, mu23) = (lam + offset, lam), i.e. mu12 = mu23 + offset."""
    return lambda lam: (lam + offset, lam)


def mu12_line(mu23: float) -> Callable[[float], tuple[float, float]]:
    """Path lam -> (lam, mu23): sweep mu12 at fixed mu23."""
    return lambda lam: (lam, mu23)


def mu23_line(mu12: float) -> Callable[[float], tuple[float, float]]:
    """Path lam -> (mu12, lam): sweep mu23 at fixed mu12."""
    return lambda lam: (mu12, lam)


def sweep_line(
    params_base: ModelParams,
    path: Callable[[float], tuple[float, float]],
    lam_lo: float,
    lam_hi: float,
    dlam: float,
    policy: MmaxPolicy | None = None,
    description: str = "",
    threads: int = 1,
) -> SweepTrace:
    """Sample the global ground state along a coupling-space line.

    Each sample carries the winning sector and energy; fidelity and chi are
    computed between consecutive ground states (the last sample has neither).
    """
    if dlam <= 0:
        raise InvalidParameterError(f"parameter step must be positive, got {dlam}")
    if lam_hi < lam_lo:
        raise InvalidParameterError("empty sweep range")
    policy = policy or MmaxPolicy()
    count = int(math.floor((lam_hi - lam_lo) / dlam + 1e-9)) + 1
    lams = [lam_lo + i * dlam for i in range(count)]

    def ground_at(lam: float):
        mu12, mu23 = path(lam)
        if mu12 < 0 or mu23 < 0:
            raise InvalidParameterError(
                f"sweep path leaves the mu >= 0 quadrant at lam={lam}: ({mu12}, {mu23})"
            )
        try:
            return global_ground(params_base.with_couplings(mu12, mu23), policy)
        except IncompleteScanError as exc:
            raise IncompleteScanError(
                f"incomplete sector scan at sweep point lam={lam}: {exc}", partial=exc.partial
            ) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(ground_at, lams))
    else:
        records = [ground_at(lam) for lam in lams]

    samples = []
    for i, (lam, rec) in enumerate(zip(lams, records)):
        mu12, mu23 = path(lam)
        if i + 1 < len(records):
            f = fidelity(rec.sector_state(), records[i + 1].sector_state())
            chi = susceptibility(f, dlam)
        else:
            f = chi = None
        samples.append(
            SweepSample(
                lam=lam,
                mu12=mu12,
                mu23=mu23,
                winning_m=rec.winning_m,
                energy=rec.energy,
                fidelity_to_next=f,
                chi=chi,
            )
        )
    return SweepTrace(
        description=description,
        dlam=dlam,
        samples=tuple(samples),
        params_base=params_base,
        path=path,
        policy=policy,
    )


def ground_label(params: ModelParams, policy: MmaxPolicy | None = None) -> int:
    """Winning sector of the global ground-state scan (no eigenvectors computed)."""
    policy = policy or MmaxPolicy()
    minima, best_m, fired = scan_sector_minima(params, policy)
    if not fired:
        cap_m, cap_e = minima[-1]
        if (len(minima) >= 2 and cap_e < minima[-2][1]) or best_m == cap_m:
            raise IncompleteScanError(
                f"sector scan reached its cap M={cap_m} with E0 still falling "
                f"at (mu12, mu23) = ({params.mu12}, {params.mu23})"
            )
    return best_m


def detect_transitions(
    trace: SweepTrace,
    width: float = 1e-8,
    chi_peak_factor: float = 10.0,
) -> TransitionReport:
    """Refine every winning-label change of a sweep by bisection.

    Crossings are bisected on the integer label down to a bracket of the
    given width.  Local chi maxima above ``chi_peak_factor`` times the median
    chi that sit away from any label change are reported separately (they
    mark ground-state rearrangements the label cannot see).
    """
    samples = trace.samples
    if len(samples) < 2:
        return TransitionReport(crossings=(), chi_peaks=())

    def label_at(lam: float) -> int:
        mu12, mu23 = trace.path(lam)
        return ground_label(trace.params_base.with_couplings(mu12, mu23), trace.policy)

    crossings = []
    change_indices = []
    for i in range(len(samples) - 1):
        if samples[i].winning_m == samples[i + 1].winning_m:
            continue
        change_indices.append(i)
        lo, hi = samples[i].lam, samples[i + 1].lam
        label_lo = samples[i].winning_m
        while hi - lo > width:
            mid = 0.5 * (lo + hi)
            if label_at(mid) == label_lo:
                lo = mid
            else:
                hi = mid
        crossings.append(0.5 * (lo + hi))

    chis = np.array([s.chi for s in samples if s.chi is not None])
    peaks = []
    if chis.size >= 3:
        threshold = chi_peak_factor * float(np.median(chis))
        for j in range(1, len(chis) - 1):
            if not (chis[j] > chis[j - 1] and chis[j] > chis[j + 1]):
                continue
            if chis[j] < threshold or chis[j] <= 0:
                continue
            if any(abs(j - i) <= 2 for i in change_indices):
                continue
            peaks.append(samples[j].lam)
    return TransitionReport(crossings=tuple(crossings), chi_peaks=tuple(peaks))


# ---------------------------------------------------------------------------
# batched sector minima (the grid engine)


@lru_cache(maxsize=512)
def _bipartite_blocks(na: int, m: int):
    """Photon-parity blocks of the coupling matrices, oriented smaller side first.

    In double resonance the sector Hamiltonian is c*I - C with C bipartite in
    nu parity, so its lowest eigenvalue is c - sigma_max(S) where S is the
    even/odd coupling block.
    """
    basis, w12, w23 = sector_coupling_blocks(na, m)
    even = np.flatnonzero(basis.nu % 2 == 0)
    odd = np.flatnonzero(basis.nu % 2 == 1)
    if len(even) > len(odd):
        even, odd = odd, even
    b12 = np.ascontiguousarray(w12[np.ix_(even, odd)])
    b23 = np.ascontiguousarray(w23[np.ix_(even, odd)])
    for arr in (b12, b23):
        arr.setflags(write=False)
    return b12, b23


def _batched_sector_min(
    params_base: ModelParams, m: int, mu12: np.ndarray, mu23: np.ndarray
) -> np.ndarray:
    """Lowest sector eigenvalue at many coupling points at once."""
    if params_base.is_double_resonance:
        const = params_base.omega * m + params_base.na * params_base.omega1
        b12, b23 = _bipartite_blocks(params_base.na, m)
        p, q = b12.shape
        if p == 0 or q == 0:
            return np.full(len(mu12), const)
        s = mu12[:, None, None] * b12 + mu23[:, None, None] * b23
        gram = s @ np.swapaxes(s, 1, 2)
        top = np.linalg.eigvalsh(gram)[:, -1]
        return const - np.sqrt(np.maximum(top, 0.0))
    from .hamiltonian import diagonal_energies

    basis, w12, w23 = sector_coupling_blocks(params_base.na, m)
    diag = diagonal_energies(params_base, basis)
    h = -mu12[:, None, None] * w12 - mu23[:, None, None] * w23
    idx = np.arange(basis.dimension)
    h[:, idx, idx] += diag
    return np.linalg.eigvalsh(h)[:, 0]


def _scan_labels_batch(
    params_base: ModelParams, mu12: np.ndarray, mu23: np.ndarray, policy: MmaxPolicy
):
    """Winning labels for a batch of coupling points.

    Emulates the sequential stop-rule scan of ``global_ground`` node by node,
    but evaluates each sector for the whole batch at once.  Returns
    (labels, incomplete) arrays.
    """
    n = len(mu12)
    caps = np.array(
        [
            policy.resolve_cap(params_base.with_couplings(float(a), float(b)))
            for a, b in zip(mu12, mu23)
        ],
        dtype=np.int64,
    )
    best_e = np.full(n, np.inf)
    best_m = np.full(n, -1, dtype=np.int64)
    prev_e = np.full(n, np.inf)
    prev2_e = np.full(n, np.inf)
    rises = np.zeros(n, dtype=np.int64)
    active = np.ones(n, dtype=bool)
    incomplete = np.zeros(n, dtype=bool)
    for m in range(int(caps.max()) + 1):
        sel = np.flatnonzero(active & (caps >= m))
        if sel.size == 0:
            break
        e = _batched_sector_min(params_base, m, mu12[sel], mu23[sel])
        if m > 0:
            rise = (e > prev_e[sel]) & (e > best_e[sel])
            rises[sel] = np.where(rise, rises[sel] + 1, 0)
        win = (best_m[sel] < 0) | (e < best_e[sel] - policy.tie_tol)
        best_e[sel] = np.where(win, e, best_e[sel])
        best_m[sel] = np.where(win, m, best_m[sel])
        prev2_e[sel] = prev_e[sel]
        prev_e[sel] = e
        fired = rises[sel] >= policy.rise_run
        at_cap = caps[sel] == m
        hit_cap = at_cap & ~fired
        if hit_cap.any():
            nodes = sel[hit_cap]
            incomplete[nodes] = (prev_e[nodes] < prev2_e[nodes]) | (best_m[nodes] == m)
        active[sel[fired | at_cap]] = False
    return best_m, incomplete


def label_grid(
    params_base: ModelParams,
    mu12_values: np.ndarray,
    mu23_values: np.ndarray,
    policy: MmaxPolicy | None = None,
    threads: int = 1,
    chunk: int = 2048,
) -> np.ndarray:
    """Winning-sector label at every node of a coupling grid.

    Node (i, j) corresponds to (mu12_values[i], mu23_values[j]).  Results are
    identical to calling ``global_ground`` per node; an incomplete scan
    anywhere raises IncompleteScanError naming the first offending node.
    """
    policy = policy or MmaxPolicy()
    mu12_values = np.asarray(mu12_values, dtype=float)
    mu23_values = np.asarray(mu23_values, dtype=float)
    if (mu12_values.size and mu12_values.min() < 0) or (
        mu23_values.size and mu23_values.min() < 0
    ):
        raise InvalidParameterError("couplings must be non-negative")
    xx = np.repeat(mu12_values, len(mu23_values))
    yy = np.tile(mu23_values, len(mu12_values))
    n = len(xx)
    labels = np.empty(n, dtype=np.int64)
    incomplete = np.empty(n, dtype=bool)
    starts = list(range(0, n, chunk))

    def work(start: int) -> None:
        stop = min(start + chunk, n)
        lab, inc = _scan_labels_batch(params_base, xx[start:stop], yy[start:stop], policy)
        labels[start:stop] = lab
        incomplete[start:stop] = inc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    else:
        for start in starts:
            work(start)
    if incomplete.any():
        k = int(np.flatnonzero(incomplete)[0])
        raise IncompleteScanError(
            f"sector scan reached its cap with E0 still falling at grid node "
            f"(mu12, mu23) = ({xx[k]}, {yy[k]})"
        )
    return labels.reshape(len(mu12_values), len(mu23_values))


# ---------------------------------------------------------------------------
# phase diagram and triple points


@dataclass(frozen=True)
class GridSpec:
    """Rectangular coupling grid [mu12_lo, mu12_hi] x [mu23_lo, mu23_hi]."""

    mu12_lo: float
    mu12_hi: float
    mu12_n: int
    mu23_lo: float
    mu23_hi: float
    mu23_n: int

    def __post_init__(self):
        if self.mu12_lo < 0 or self.mu23_lo < 0:
            raise InvalidParameterError("couplings must be non-negative")
        if self.mu12_hi < self.mu12_lo or self.mu23_hi < self.mu23_lo:
            raise InvalidParameterError("grid ranges must be increasing")
        if self.mu12_n < 2 or self.mu23_n < 2:
            raise InvalidParameterError("grids need at least 2 nodes per axis")

    @property
    def mu12_values(self) -> np.ndarray:
        return np.linspace(self.mu12_lo, self.mu12_hi, self.mu12_n)

    @property
    def mu23_values(self) -> np.ndarray:
        return np.linspace(self.mu23_lo, self.mu23_hi, self.mu23_n)


@dataclass(frozen=True)
class TriplePoint:
    """A refined junction of three (or more) ground-state regions."""

    mu12: float
    mu23: float
    labels: tuple


@dataclass(frozen=True)
class PhaseDiagram:
    """Grid of winning-sector labels with boundaries and refined junctions."""

    grid: GridSpec
    labels: np.ndarray
    boundaries: np.ndarray
    triple_points: tuple
    params_base: ModelParams
    policy: MmaxPolicy


def _edge_midpoints(xs: np.ndarray, ys: np.ndarray, labels: np.ndarray) -> np.ndarray:
    points = []
    for i in range(len(xs) - 1):
        for j in range(len(ys)):
            if labels[i, j] != labels[i + 1, j]:
                points.append((0.5 * (xs[i] + xs[i + 1]), ys[j]))
    for i in range(len(xs)):
        for j in range(len(ys) - 1):
            if labels[i, j] != labels[i, j + 1]:
                points.append((xs[i], 0.5 * (ys[j] + ys[j + 1])))
    return np.array(points) if points else np.empty((0, 2))


def _candidate_components(labels: np.ndarray):
    """Connected clusters of 2x2 plaquettes whose corners carry >= 3 labels.

    Plaquettes are grouped by their (up to three lowest) corner-label set and
    clustered within each group, so two different junctions sitting close to
    each other stay separate candidates.  Yields (cells, label_set).
    """
    n12, n23 = labels.shape
    groups: dict = {}
    for i in range(n12 - 1):
        for j in range(n23 - 1):
            corner_labels = sorted(
                {
                    int(labels[i, j]),
                    int(labels[i + 1, j]),
                    int(labels[i, j + 1]),
                    int(labels[i + 1, j + 1]),
                }
            )
            if len(corner_labels) >= 3:
                groups.setdefault(tuple(corner_labels[:3]), set()).add((i, j))
    for label_set in sorted(groups):
        cells = groups[label_set]
        seen = set()
        for cell in sorted(cells):
            if cell in seen:
                continue
            stack, members = [cell], []
            seen.add(cell)
            while stack:
                ci, cj = stack.pop()
                members.append((ci, cj))
                for di in (-2, -1, 0, 1, 2):
                    for dj in (-2, -1, 0, 1, 2):
                        nb = (ci + di, cj + dj)
                        if nb in cells and nb not in seen:
                            seen.add(nb)
                            stack.append(nb)
            yield members, label_set


def _sector_energies_at(
    params_base: ModelParams, sectors: tuple, xx: np.ndarray, yy: np.ndarray
) -> np.ndarray:
    return np.stack([_batched_sector_min(params_base, m, xx, yy) for m in sectors], axis=0)


def _junction_mismatch(energies: np.ndarray) -> np.ndarray:
    """Sum of squared pairwise sector-energy differences; zero exactly at a junction.

    Unlike the plain spread max-min, this has no flat directions: inside a
    thin wedge where one sector energy lies between the other two it still
    slopes toward the junction tip, so a pattern search cannot stall there.
    """
    n = energies.shape[0]
    out = np.zeros(energies.shape[1])
    for a in range(n):
        for b in range(a + 1, n):
            out += (energies[a] - energies[b]) ** 2
    return out


def _refine_junction(
    params_base: ModelParams,
    sectors: tuple,
    center: tuple,
    width: float,
    tol: float,
    max_iter: int = 300,
) -> tuple[float, float, float]:
    """Pattern search for the point where three sector minima meet.

    Minimizes the pairwise energy mismatch of the competing sectors over a
    9x9 window.  While a window sample improves on the center the window
    recenters at constant (or, on an edge hit, growing) width, so the search
    can walk along an arbitrarily steep separatrix valley; it shrinks only
    when no sample improves, and stops at window width <= tol.  Returns
    (mu12, mu23, energy spread at the returned point).
    """
    cx, cy = center
    w = width
    # Separatrix valleys can be steep (slope grows with the atom count), so the
    # positional error perpendicular to the window scale exceeds the window
    # width; refine well past tol to land within tol in both coordinates.
    w_stop = 0.02 * tol
    f_center = float(
        _junction_mismatch(_sector_energies_at(params_base, sectors, np.array([cx]), np.array([cy])))[0]
    )
    for _ in range(max_iter):
        x0 = max(0.0, cx - 0.5 * w)
        y0 = max(0.0, cy - 0.5 * w)
        xs = x0 + w * np.linspace(0.0, 1.0, 9)
        ys = y0 + w * np.linspace(0.0, 1.0, 9)
        xx = np.repeat(xs, 9)
        yy = np.tile(ys, 9)
        f = _junction_mismatch(_sector_energies_at(params_base, sectors, xx, yy))
        k = int(np.argmin(f))
        if float(f[k]) < f_center:
            ki, kj = divmod(k, 9)
            cx, cy = float(xs[ki]), float(ys[kj])
            f_center = float(f[k])
            if ki in (0, 8) or kj in (0, 8):
                w *= 1.6  # the junction lies beyond the window: chase faster
        else:
            if w <= w_stop:
                break
            w *= 0.4
    e_final = _sector_energies_at(params_base, sectors, np.array([cx]), np.array([cy]))[:, 0]
    return cx, cy, float(e_final.max() - e_final.min())


def phase_diagram(
    params_base: ModelParams,
    grid: GridSpec,
    policy: MmaxPolicy | None = None,
    threads: int = 1,
    refine_tol: float = 1e-4,
) -> PhaseDiagram:
    """Label a coupling grid and refine every multi-region junction on it."""
    policy = policy or MmaxPolicy()
    xs = grid.mu12_values
    ys = grid.mu23_values
    labels = label_grid(params_base, xs, ys, policy=policy, threads=threads)
    boundaries = _edge_midpoints(xs, ys, labels)
    dx = xs[1] - xs[0]
    dy = ys[1] - ys[0]
    found = []
    for members, label_set in _candidate_components(labels):
        ii = [c[0] for c in members]
        jj = [c[1] for c in members]
        x_lo, x_hi = xs[min(ii)], xs[max(ii) + 1]
        y_lo, y_hi = ys[min(jj)], ys[max(jj) + 1]
        center = (0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi))
        width = max(x_hi - x_lo, y_hi - y_lo) + 4.0 * max(dx, dy)
        px, py, spread = _refine_junction(
            params_base, label_set, center, width, tol=refine_tol
        )
        if spread > 50.0 * refine_tol:
            continue  # separatrices approach but never meet here
        point = params_base.with_couplings(px, py)
        if ground_label(point, policy) not in label_set:
            continue  # the tied sectors are not globally minimal: not a junction
        found.append(TriplePoint(mu12=px, mu23=py, labels=label_set))
    deduped: list[TriplePoint] = []
    for tp in sorted(found, key=lambda t: (t.labels, t.mu12, t.mu23)):
        if any(
            tp.labels == other.labels
            and abs(tp.mu12 - other.mu12) < 10 * refine_tol
            and abs(tp.mu23 - other.mu23) < 10 * refine_tol
            for other in deduped
        ):
            continue
        deduped.append(tp)
    return PhaseDiagram(
        grid=grid,
        labels=labels,
        boundaries=boundaries,
        triple_points=tuple(deduped),
        params_base=params_base,
        policy=policy,
    )


def find_triple_points(diagram: PhaseDiagram) -> list[TriplePoint]:
    """All refined junctions of a diagram, sorted by coordinates."""
    return sorted(diagram.triple_points, key=lambda t: (t.mu12, t.mu23))
