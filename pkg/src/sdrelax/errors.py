"""Exception types shared across the package."""


class SdRelaxError(Exception):
    """Base class for all package errors."""


class MeshError(SdRelaxError):
    """Invalid mesh topology, geometry, or construction parameters."""


class FieldError(SdRelaxError):
    """Field data inconsistent with its mesh."""


class DatumError(SdRelaxError):
    """Boundary datum incompatible with the mesh (e.g. orientation mismatch)."""


class ProblemError(SdRelaxError):
    """Cell problem specification is incomplete or inconsistent."""


class UnsupportedProblemError(SdRelaxError):
    """Problem combination outside the solvable class (e.g. custom surface
    density in the linear-programming path, or a general bulk density paired
    with a per-cell mean field in 3D)."""


class InfeasibleProblemError(SdRelaxError):
    """Defensive: the linear program reported an infeasible constraint set."""


class InputError(SdRelaxError):
    """Malformed external input (CLI arguments or JSON files)."""
