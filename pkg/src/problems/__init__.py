"""Problem definitions, bundled families and the named catalog."""

from .builders import (
    kkt_oracle,
    make_elastic_net_problem,
    make_quadratic_problem,
    problem_from_dict,
    quadratic_certificate,
    random_elastic_net_problem,
    random_quadratic_problem,
)
from .catalog import CatalogEntry, ProblemCatalog
from .model import (
    ConvexProblem,
    QuadraticTerm,
    SaddleCertificate,
    prox_f,
    prox_f_conjugate,
    soft_threshold,
)

__all__ = [
    "CatalogEntry",
    "ConvexProblem",
    "ProblemCatalog",
    "QuadraticTerm",
    "SaddleCertificate",
    "kkt_oracle",
    "make_elastic_net_problem",
    "make_quadratic_problem",
    "problem_from_dict",
    "prox_f",
    "prox_f_conjugate",
    "quadratic_certificate",
    "random_elastic_net_problem",
    "random_quadratic_problem",
    "soft_threshold",
]
