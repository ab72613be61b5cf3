"""Local, persistent and persistent-local Laplacians of simplicial complexes."""

from .complex import (
    ChainComplex,
    SimplicialComplex,
    betti_numbers,
    build_complex,
    chain_complex,
    combinatorial_laplacian,
    reduced_betti_numbers,
)
from .localize import deleted_subcomplex, link, local_betti, local_laplacian
from .numerics import DEFAULT_TOL, Spectrum, Tolerance, symmetric_eigenvalues
from .persist import (
    DGMorphism,
    Filtration,
    PersistentVertex,
    generalized_persistent_laplacian,
    make_filtration,
    persistent_betti_oracle,
    persistent_local_betti,
    persistent_local_laplacian,
)

__version__ = "0.1.0"
