"""Exception hierarchy shared by the library and the CLI."""


class PlanarFlowError(Exception):
    """Base class for every error raised by planarflow."""


class StructuralError(PlanarFlowError):
    """Malformed rotation system, non-simple path, illegal surgery."""


class NonPlanarEmbeddingError(StructuralError):
    """The rotation system describes a surface of positive genus."""


class ContractError(PlanarFlowError):
    """An internal pre/postcondition (pseudoflow feasibility, a residual
    reachability claim, price feasibility, ...) does not hold."""


class InputError(PlanarFlowError):
    """Bad user input: unparseable files, overflow-prone capacities."""
