"""Runtime-tunable caps and switches.

Values are module level so tests and the CLI can adjust them in place.
"""

# Index labels of one multiset must fit a fixed-width bitmask.
MAX_MULTISET_SIZE = 40

# Full 2^l subset scans are used up to this size; beyond it, subset listing
# switches to meet-in-the-middle and membership checks switch to
# multiplicity-vector enumeration.
DIRECT_SCAN_LIMIT = 20

# Listed zero-sum subsets per call before a resource-limit error.
SUBSET_OUTPUT_CAP = 2_000_000

# Multiplicity vectors enumerated per call before a resource-limit error.
VECTOR_CAP = 1_000_000

# Atoms per catalog before a resource-limit error.
ATOM_ENTRY_CAP = 500_000

# Atom-based invariants (D, K, k) reject groups above this order.
ATOM_ORDER_CAP = 64

# Exact K1 / N1 searches reject groups above this order.
SEARCH_ORDER_CAP = 16

# When on, unique-factorization tests run both algorithms and compare.
VERIFICATION_MODE = False
