"""hexlat: interaction energies of the hexagonal lattice and machine checks
of its local optimality under completely monotonic pair potentials.

Submodules:

* ``geometry``     the lattice, its reciprocal, Voronoi cells, shells
* ``perturbation`` periodic displacement fields and their spectral measures
* ``energy``       Gaussian / Riesz / mixture energies with certified bounds
* ``designs``      hexagon design identities and the periodic 2-design bound
* ``minimality``   the direction-weighted sum, its gap scans, case analysis
* ``suites``       verification batteries, probes, landscape export
* ``cli``          the ``hexlat`` command
"""

from .geometry import (
    R_STAR,
    R_STAR_SQ,
    SIGMA,
    TAU,
    embed,
    enumerate_ball,
    reciprocal_point,
    voronoi_reduce,
)
from .perturbation import (
    PeriodicPerturbation,
    displacement_law,
    fs_size,
    load_perturbation,
    periodize,
    random_perturbation,
    sm_size,
    spectral_measure,
)
from .energy import (
    AtomicMixture,
    EnergyValue,
    Gaussian,
    Riesz,
    cmsd_energy_diff,
    finite_window_energy,
    gaussian_lattice_energy,
    perturbed_energy_diff,
    riesz_energy,
    uniformity_ratio,
)
from .designs import geom_matrix, periodic_two_design_check, w_inequality_check
from .minimality import (
    first_shell_case_audit,
    numeric_inequality_suite,
    psi_eval,
    psi_gap_scan,
    worstcase_chain_eval,
)

__version__ = "0.1.0"
