"""Feasibility limits for the exact oracles, in one place."""

# enumerate_configurations: (17)!! > 3e8 items, refuse beyond this
MAX_ENUM_CLONES = 16

# exact rational partition probability (big factorials stay cheap here)
MAX_EXACT_CLONES = 40

# backtracking coloring counter
MAX_COUNT_VERTICES = 30
MAX_COUNT_COLORS = 4

# exhaustive cluster / separability oracles
MAX_CLUSTER_VERTICES = 14
MAX_CLUSTER_COLORS = 4

# cycle census DFS is meant for short cycles only
MAX_CYCLE_LENGTH = 12

# exhaustive subset search in the density falsifier
MAX_DENSITY_EXHAUSTIVE = 12
