from .certificates import CoverCandidate, theorem_check
from .search import SearchConfig, search_covers
