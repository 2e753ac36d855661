"""Exact rational models: Sullivan algebras, free DGLs, mapping-space models, formality."""

from .cdga import (CDGAMorphism, CohomologyAlgebra, Element, FiniteCDGA, Generator,
                   SullivanAlgebra, check_morphism, cohomology, cohomology_algebra,
                   cohomology_dims, finite_dimensional_model, is_free_graded_commutative,
                   odd_spherical_retract)
from .dgl import (FreeDGL, LieElement, LieGenerator, TensorLieModel, bracket,
                  evaluation_maps, mapping_space_lie_model)
from .bridge import cstar, sphere_mapping_space_model
from .formality import (CERTIFIED_FORMAL, CERTIFIED_NONFORMAL, INCONCLUSIVE,
                        bigraded_model, formality_check, koszul_formality,
                        lemma37_witness, massey_triple, minimal_model,
                        regular_sequence_check, retract_transfer_check)
from .modelfile import format_model, load_model, parse_model
from .exceptions import (ConnectivityViolation, DifferentialError, ModelError, ModelParseError,
                         NonHomogeneousInput, NotAMorphism, NotARetract, NotSimplyConnected,
                         TopDegreeNotFound)

__version__ = "0.1.0"

__all__ = [
    "CDGAMorphism",
    "CohomologyAlgebra",
    "Element",
    "FiniteCDGA",
    "Generator",
    "SullivanAlgebra",
    "check_morphism",
    "cohomology",
    "cohomology_algebra",
    "cohomology_dims",
    "finite_dimensional_model",
    "is_free_graded_commutative",
    "odd_spherical_retract",
    "FreeDGL",
    "LieElement",
    "LieGenerator",
    "TensorLieModel",
    "bracket",
    "evaluation_maps",
    "mapping_space_lie_model",
    "cstar",
    "sphere_mapping_space_model",
    "CERTIFIED_FORMAL",
    "CERTIFIED_NONFORMAL",
    "INCONCLUSIVE",
    "bigraded_model",
    "formality_check",
    "koszul_formality",
    "lemma37_witness",
    "massey_triple",
    "minimal_model",
    "regular_sequence_check",
    "retract_transfer_check",
    "format_model",
    "load_model",
    "parse_model",
    "ConnectivityViolation",
    "DifferentialError",
    "ModelError",
    "ModelParseError",
    "NonHomogeneousInput",
    "NotAMorphism",
    "NotARetract",
    "NotSimplyConnected",
    "TopDegreeNotFound",
]
