from .relations import RelationScheme, build_relations
from .idempotents import dual_eigenmatrix, idempotents_from_Q, build_scheme
