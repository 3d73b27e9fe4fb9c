"""Maximum flow with multiple sources and sinks in directed planar graphs."""

from .errors import (ContractError, InputError, NonPlanarEmbeddingError, PlanarFlowError,
                     StructuralError)
from .fileformat import Instance, dumps, loads, read_instance, write_instance
from .flow_core import FlowSolution, finalize_pseudoflow
from .generators import generate
from .matching import planar_bipartite_matching
from .msms import msms_maxflow
from .oracle import oracle_maxflow
from .planar_core import PlanarGraph
from .verify import verify

__all__ = [
    "ContractError", "FlowSolution", "InputError", "Instance", "NonPlanarEmbeddingError",
    "PlanarFlowError", "PlanarGraph", "StructuralError", "dumps", "finalize_pseudoflow",
    "generate", "loads", "msms_maxflow", "oracle_maxflow", "planar_bipartite_matching",
    "read_instance", "verify", "write_instance",
]
