"""Workbench for translation-invariant and fractal-supported codes.

Builds symbolic code families over GF(q), instantiates them on finite
lattices, computes code parameters (dimension, distance, energy barrier),
checks isoperimetric-expansion properties, and estimates memory times
under heat-bath (Glauber) dynamics.
"""

from .fields import Field, field_make
from .laurent import LaurentPoly, PolyMatrix, poly_parse
from .linalg import (
    BudgetExceeded,
    SparseFqMatrix,
    SparseWord,
    coset_min_weight,
    distance,
    is_trivial_logical,
    kernel_basis,
    quantum_dimension,
    rank,
)
from .families import (
    CodeInstance,
    TannerSpec,
    TransInvCode,
    classical_from_tanner,
    code_from_dict,
    code_to_dict,
    instantiate,
    load_code,
    make_bipartite_product,
    make_classical_grid,
    make_haah_family,
    make_ising,
    make_toric,
    save_code,
    validate_css,
)
from .barriers import (
    BarrierResult,
    FractalWord,
    Walk,
    barrier_exact,
    barrier_heuristic,
    enumerate_irreducible,
    expansion_check,
    fractal_site_walk,
    fractal_word,
    quantum_expansion_check,
    symbolic_walk_energy,
    walk_energy,
)
from .dynamics import (
    DecoderSpec,
    GlauberParams,
    MemoryTimeEstimate,
    estimate_memory_time,
    exact_gibbs,
    make_decoder,
    rate,
)
from .fractal import (
    ChainComplex3,
    PrefractalRegion,
    carpet,
    hypergraph_product,
    locality_check,
    random_local_code,
)
from .experiments import run_simulate, run_sweep

__version__ = "0.1.0"
