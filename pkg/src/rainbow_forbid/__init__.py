"""Proper edge-colorings of K_{m,n} that forbid rainbow even cycles."""

from .constructions import (
    cyclic_square,
    k37_coloring,
    km8_coloring,
    restrict_rows,
    theorem22_coloring,
)
from .fmc import (
    BudgetExceeded,
    FmcReport,
    SearchOutcome,
    compute_fmc,
    compute_fmc6,
    decide_membership,
    verify_lemma_3_4_structure,
    verify_prop_3_1,
    verify_prop_3_2,
)
from .latin import (
    LatinRectangle,
    SubArrayView,
    canonical_form,
    direct_product,
    disjoint_transversal_pairs,
    distinct_symbol_count,
    find_column_triple_latin_square,
    find_intercalate,
    transversals,
    validate,
)
from .rainbow import (
    EdgeColoring,
    RainbowCycleCertificate,
    classify_3x3,
    constructive_find,
    count_rainbow_cycles,
    find_rainbow_cycle,
    quadrant_profile,
    to_coloring,
    to_rectangle,
)

__version__ = "0.1.0"
