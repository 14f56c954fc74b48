"""Python access to the spg core: structure-file checks, catalogs, algebra verdicts and PW integration."""

from ._spg import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOL,
    AlgebraError,
    ParseError,
    StructureFileError,
    catalog_ids,
    check_file,
    check_text,
    derivative,
    evaluate,
    export_jj,
    hopf_matrix,
    integrate_file,
    jj_verdicts,
    run_catalog,
    su2_flow,
)

__all__ = [
    "DEFAULT_SAMPLES",
    "DEFAULT_SEED",
    "DEFAULT_TOL",
    "AlgebraError",
    "ParseError",
    "StructureFileError",
    "catalog_ids",
    "check_file",
    "check_text",
    "derivative",
    "evaluate",
    "export_jj",
    "hopf_matrix",
    "integrate_file",
    "jj_verdicts",
    "run_catalog",
    "su2_flow",
]
