"""Local-unitary invariants, Acin forms and fixed-tangle families of three-qubit states."""
from .statecore import PureState3, LocalOp, make_state, preset_state, haar_random_state
from .acin import AcinParams, to_acin, from_acin
from .invariants import TangleVector, tangle_vector, kempe_i5, three_tangle, concurrence

__version__ = "0.1.0"
