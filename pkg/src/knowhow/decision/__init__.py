from .bounded import bounded_model_search
from .canonical import (DEFAULT_ATOM_CAP, Atom, CanonicalModel, SatResult, atoms,
                        canonical_model, free_members, satisfiable, valid)

__all__ = [
    "Atom", "CanonicalModel", "DEFAULT_ATOM_CAP", "SatResult", "atoms", "bounded_model_search",
    "canonical_model", "free_members", "satisfiable", "valid",
]
