"""Exact diagonalization of ladder-type three-level atoms in a single-mode cavity.

The rotating-wave Hamiltonian conserves the excitation number
M = a^dag a + A22 + 2 A33, so everything reduces to small dense symmetric
blocks: sector spectra, the global ground state across sectors, the
ground-state phase diagram over the couplings (mu12, mu23) with its
atom-number-independent triple point at (1, sqrt(2)) in double resonance,
fidelity/susceptibility sweeps, level populations, photon-number
distributions, and the infinite-atom-number limit.
"""

from .basis import BasisState, SectorBasis, enumerate_basis, sector_dimension
from .criticality import (
    GridSpec,
    PhaseDiagram,
    SweepTrace,
    TransitionReport,
    TriplePoint,
    detect_transitions,
    fidelity,
    find_triple_points,
    ground_label,
    label_grid,
    mu12_line,
    mu23_line,
    offset_path,
    phase_diagram,
    susceptibility,
    sweep_line,
)
from .errors import (
    ConsistencyError,
    ConvergenceFailureError,
    IncompleteScanError,
    InvalidParameterError,
    InvalidStateError,
    NumericalFailureError,
    XiLadderError,
)
from .hamiltonian import (
    SectorMatrix,
    ThermoSectorMatrix,
    build_sector,
    build_thermo_sector,
    enumerate_thermo_basis,
)
from .observables import (
    ExpectationRow,
    PhotonDistribution,
    expectations,
    photon_distribution,
    photon_distribution_limit,
)
from .params import Detunings, ModelParams, detunings, double_resonance
from .spectra import (
    GroundStateRecord,
    MirrorPair,
    MmaxPolicy,
    SectorSpectrum,
    SectorState,
    degeneracy_at_mirror_energy,
    diagonalize,
    global_ground,
    mirror_pairs,
    sector_ground,
)
from .thermo import ThermoSpectrumLine, thermo_fan, thermo_lines, thermo_spectrum

__version__ = "0.1.0"
