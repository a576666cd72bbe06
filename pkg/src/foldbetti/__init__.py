"""Exact Betti numbers of ideals generated by fold products of linear forms.

The public surface: build a :class:`~foldbetti.forms.FormCollection` with
:func:`~foldbetti.forms.normalize`, then ask :func:`~foldbetti.betti.compute_betti`
for a table by any method, or go through the ``foldbetti`` CLI.
"""

from .betti import (
    BettiTable,
    b1_k3_veronese,
    b1_singular_line_arrangement,
    b1_tutte,
    b1_veronese,
    betti_cm_generic,
    betti_from_b1_height_km1,
    betti_height1_reduce,
    betti_k3_block,
    betti_maximal_power,
    betti_nminus1,
    betti_nminus2_arrangement,
    betti_rank2,
    betti_recursion,
    compute_betti,
    herzog_kuhl_residuals,
)
from .exactlin import Fp, Matrix, kernel_basis, rank, row_space_rank_of_stack
from .forms import (
    FormCollection,
    LinearForm,
    ReductionData,
    coefficient_matrix,
    contract,
    delete,
    essentialize,
    normalize,
    reduction_data,
)
from .matroid import (
    HammingWeights,
    TuttePoly,
    circuits_up_to,
    hamming_weights,
    height_of_fold_ideal,
    rank2_flats,
    subset_rank,
    tutte_polynomial,
    tutte_shifted_coeffs,
)
from .oracle import (
    HFReport,
    OracleLimitError,
    RelationSpace,
    b1_via_circuits,
    betti_from_hilbert,
    fold_generators,
    hilbert_function,
    relation_space,
)

__version__ = "0.1.0"
