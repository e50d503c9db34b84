"""Exact computations with corings, comodules and bicomodules over finite-dimensional algebras."""

from .algebra import (AlgebraMap, AlgebraPresentation, Bimodule, BimoduleMap, QuotientPresentation,
                      ground, group_algebra, matrix_algebra, product_algebra, tensor,
                      validate_presentation)
from .cohom import (CoendCoring, CohomPresentation, ComatrixContext, ComatrixCoring, FiniteComatrix,
                    NotQuasiFinite, coend_coring, cohom, comatrix_coring, delta_iso,
                    finite_comatrix, is_injective_comodule, triangle_identities)
from .comodule import (Bicomodule, CotensorPresentation, check_comodule, cotensor, hom_comodules,
                       left_comodule, regular_comodule, right_comodule)
from .coring import (Coring, CoringMorphism, check_coring, coseparability_witness,
                     cosplit_witness, divided_power_coalgebra, grouplike_coalgebra,
                     matrix_coalgebra, trivial_coring, verify_coseparability_witness)
from .equivalence import (EquivalenceCertificate, can_and_phi, induction_equivalence,
                          sigma_equivalence, verify_certificate)
from .graded import (BigradedBimodule, FiniteGroup, GradedAlgebra, GradedInductionData,
                     GradedModule, GSet, graded_coring, graded_comodule_bridge,
                     graded_induction_check, graded_morita_check, validate_graded)
from .instance import parse_instance
from .linalg import GF, QQ, Field, Matrix
from .verdict import Verdict

__all__ = [
    "AlgebraMap",
    "AlgebraPresentation",
    "Bicomodule",
    "BigradedBimodule",
    "Bimodule",
    "BimoduleMap",
    "can_and_phi",
    "check_comodule",
    "check_coring",
    "coend_coring",
    "CoendCoring",
    "cohom",
    "CohomPresentation",
    "comatrix_coring",
    "ComatrixContext",
    "ComatrixCoring",
    "Coring",
    "CoringMorphism",
    "coseparability_witness",
    "cosplit_witness",
    "cotensor",
    "CotensorPresentation",
    "delta_iso",
    "divided_power_coalgebra",
    "EquivalenceCertificate",
    "Field",
    "finite_comatrix",
    "FiniteComatrix",
    "FiniteGroup",
    "GF",
    "graded_comodule_bridge",
    "graded_coring",
    "graded_induction_check",
    "graded_morita_check",
    "GradedAlgebra",
    "GradedInductionData",
    "GradedModule",
    "ground",
    "group_algebra",
    "grouplike_coalgebra",
    "GSet",
    "hom_comodules",
    "induction_equivalence",
    "is_injective_comodule",
    "left_comodule",
    "Matrix",
    "matrix_algebra",
    "matrix_coalgebra",
    "NotQuasiFinite",
    "parse_instance",
    "product_algebra",
    "QQ",
    "QuotientPresentation",
    "regular_comodule",
    "right_comodule",
    "sigma_equivalence",
    "tensor",
    "triangle_identities",
    "trivial_coring",
    "validate_graded",
    "validate_presentation",
    "Verdict",
    "verify_certificate",
    "verify_coseparability_witness",
]

__version__ = "0.1.0"
