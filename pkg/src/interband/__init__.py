"""Resonant interband dynamics of bosons in a tilted two-band lattice.

Full Bose-Hubbard propagation, the effective spin chain, the analytic magnon
picture and collapse/revival analysis.
"""

__version__ = "0.1.0"

from .analysis import (  # noqa: E402
    RevivalRecord,
    envelope,
    extract_revival,
    scaling_collapse,
    scan_revival,
)
from .bessel import bessel_addition_check, bessel_j  # noqa: E402
from .errors import CapacityError, ConfigError, NumericalError  # noqa: E402
from .fock import (  # noqa: E402
    FockBasis,
    FockState,
    enumerate_basis,
    index_of,
    initial_state_lower_band,
    state_at,
)
from .hamiltonian import (  # noqa: E402
    BosonicHamiltonian,
    SpinHamiltonian,
    apply_bosonic,
    apply_spin,
    ising_form_check,
    spin_hamiltonian_from_params,
)
from .params import (  # noqa: E402
    FIG1_PARAMS,
    DerivedParams,
    ModelParams,
    derive_parameters,
    resonant_force_estimate,
)
from .propagate import TimeSeries, evolve, fraction_up, occupation_upper  # noqa: E402
from .runs import run_full, run_spin  # noqa: E402
from .spin import (  # noqa: E402
    bogolyubov_angle,
    dispersion,
    eigen_expansion,
    frequency_shift,
    magnon_ground_energy,
    magnon_spectrum,
    predict_revival_time,
)
from .states import SpinSpace, StateVector, all_down_state  # noqa: E402
from .tables import read_timeseries, write_timeseries  # noqa: E402
