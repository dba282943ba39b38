from ._core import (
    DomainError,
    SingularError,
    SplineFamily,
    StructureError,
    bspline_basis,
    deriva,
    dintegra,
    equidistant,
    fpca,
    gramian,
    integra,
    is_valid,
    lincomb,
    project_data,
    project_splines,
    rspline,
    splinet,
)

__all__ = [
    "DomainError",
    "SingularError",
    "SplineFamily",
    "StructureError",
    "bspline_basis",
    "deriva",
    "dintegra",
    "equidistant",
    "fpca",
    "gramian",
    "integra",
    "is_valid",
    "lincomb",
    "project_data",
    "project_splines",
    "rspline",
    "splinet",
]
