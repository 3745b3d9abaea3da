"""Exact matchings between persistence barcodes induced by morphisms and spans."""

from .bl import SetMatching, bl_matching, image_module, iota, lambda_
from .enriched import (
    EnrichedMatching,
    Span,
    endpoint_counts,
    enriched_matching,
    k_endpoint_counts,
    k_module,
    l_space,
    r_space,
    y_value,
)
from .errors import BimatchError, DimensionMismatch, ParseError, ValidationError
from .filtration import (
    PartialSimplicialMap,
    SimplicialFiltration,
    homology_module,
    induced_morphism,
    span_from_filtrations,
    union_filtration,
)
from .ladder import LadderMorphism, Matching, chi, elder, induced_matching, validate
from .linalg import Matrix, PrimeModulus, Subspace
from .persistence import Barcode, IntervalKey, PersistenceDiagram, PersistenceModule, barcode, diagram

__version__ = "0.1.0"
