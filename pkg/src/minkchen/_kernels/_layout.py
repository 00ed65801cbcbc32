"""Column layout of the per-point invariant table produced by the kernels."""

COLUMNS = (
    "E", "F", "G", "W", "L", "M", "N", "k", "varkappa", "K",
    "H0", "H1", "H2", "H3", "H_norm2", "lambda",
    "a0", "a1", "a2", "a3", "l0", "l1", "l2", "l3",
    "point_class", "minimal_residual", "status",
)
NCOLS = len(COLUMNS)

COLUMN_INDEX = {name: i for i, name in enumerate(COLUMNS)}
COLUMN_INDEX["H"] = slice(COLUMN_INDEX["H0"], COLUMN_INDEX["H3"] + 1)
COLUMN_INDEX["allied"] = slice(COLUMN_INDEX["a0"], COLUMN_INDEX["a3"] + 1)
COLUMN_INDEX["l"] = slice(COLUMN_INDEX["l0"], COLUMN_INDEX["l3"] + 1)

STATUS_OK = 0
STATUS_MINIMAL = 1
STATUS_LIGHTLIKE = 2
STATUS_UMBILICAL = 3
STATUS_NOT_SPACELIKE = 4
STATUS_NAMES = {STATUS_OK: "ok", STATUS_MINIMAL: "minimal", STATUS_LIGHTLIKE: "lightlike",
                STATUS_UMBILICAL: "umbilical", STATUS_NOT_SPACELIKE: "not-spacelike"}

# tolerances shared with minkchen.surface
CLASSIFY_TOL = 1e-9
MINIMAL_TOL = 1e-9
NULL_TOL = 1e-9
UMBILIC_TOL = 1e-9
CLAMP = 1e-12
