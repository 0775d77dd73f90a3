"""Pythagorean languages, their verbatim enumeration functions, and matrix convexity."""

from .convexity import (
    Realization,
    build_realization,
    coefficient,
    eval_realization,
    eval_series,
    hankel,
    midpoint_convexity_test,
)
from .graph import ChromaticGraph
from .language import (
    BuiltinLanguage,
    ExplicitLanguage,
    GraphLanguage,
    builtin,
    enumerate_words,
    load_language,
    membership,
)
from .linalg import MatrixTuple, ScaledMatrix, is_psd, spectral_norm, tuple_norm
from .radius import amt_fixed_point, ando_fixed_point, dyck_polys, gelfand_estimate, numerical_radius
from .structure import (
    build_graph,
    builtin_graph,
    check_pythagorean,
    check_self_adjoint,
    chromatic_graph,
    ellipse_table,
)
from .words import Alphabet, Symbol, Word, involute, is_selfadjoint_word, parse_word

__version__ = "0.1.0"
