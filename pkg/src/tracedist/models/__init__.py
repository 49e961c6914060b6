from .eigenstates import (
    ISING_ENERGY_WINDOW,
    BandCenterSelection,
    band_center_eigenstates,
    eigenstate_pair_distances,
    gaussian_dos_fit,
    pair_distance_samples,
)
from .ising import (
    IsingSpec,
    MomentumSector,
    build_ising_hamiltonian,
    momentum_sectors,
    sector_hamiltonian,
    translation_operator,
)
from .syk import (
    SykSpec,
    build_syk_hamiltonian,
    even_parity_indices,
    even_parity_sector,
    majorana_operators,
    parity_diagonal,
    syk_couplings,
)
