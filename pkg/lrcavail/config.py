"""Module-level configuration for LRCAvail. Override per call via keyword arguments."""

# --- FIELDS ---
MAX_BASE_WIDTH = 16
IRREDUCIBLE_MAX_TRIES = 10**6

# Primitive polynomials over GF(2), bit i = coefficient of x^i.
PRIMITIVE_POLYNOMIALS = {
    1: 0b11,           # x + 1
    2: 0b111,          # x^2 + x + 1
    3: 0b1011,         # x^3 + x + 1
    4: 0x13,           # x^4 + x + 1
    5: 0x25,           # x^5 + x^2 + 1
    6: 0x43,           # x^6 + x + 1
    7: 0x83,           # x^7 + x + 1
    8: 0x11D,          # x^8 + x^4 + x^3 + x^2 + 1
    9: 0x211,          # x^9 + x^4 + 1
    10: 0x409,         # x^10 + x^3 + 1
    11: 0x805,         # x^11 + x^2 + 1
    12: 0x1053,        # x^12 + x^6 + x^4 + x + 1
    13: 0x201B,        # x^13 + x^4 + x^3 + x + 1
    14: 0x4443,        # x^14 + x^10 + x^6 + x + 1
    15: 0x8003,        # x^15 + x + 1
    16: 0x1100B,       # x^16 + x^12 + x^3 + x + 1
}

# --- CONSTRUCTIONS ---
WZL_MAX_LENGTH = 10**5
DEFAULT_SAMPLER_TRIES = 10**4
PARITY_RESEED_ATTEMPTS = 32

# --- SEARCH BUDGETS (desk scale) ---
LOCAL_CHECK_BUDGET = 50_000_000
EXPANSION_MAX_SUBSET = 24
EXPANSION_SUBSET_BUDGET = 2_000_000
AVAILABILITY_NODE_BUDGET = 1_000_000
EXHAUSTIVE_CODEWORD_LIMIT = 2**22
CODEWORD_CHUNK = 2**14
RANK_DISTANCE_LIMIT = 2**20
ADVERSARIAL_REMAINDER_LIMIT = 5000

# --- NUMERICS ---
ROOT_XTOL = 1e-14
ROOT_RESIDUAL = 1e-12
ROOT_MAX_ITER = 400
BRACKET_HALVINGS = 1000
GAMMA_XTOL = 1e-10

# --- MONTE CARLO ---
DEFAULT_TRIALS = 1000

# --- SERIALIZATION ---
FORMAT_VERSION = "1"
CSV_HEADER = ("delta", "upper_new", "upper_tbf", "lower_expander", "lower_concat", "rate_cap")
CSV_DIGITS = 12

# Bound anchors printed next to every value by `bounds`.
BOUND_LABELS = {
    "wang_rawat": "Wang/Rawat availability bound (ceiling form)",
    "tbf": "floor-sum bound, sum of floor((k-1)/r^i)",
    "yaakobi": "Yaakobi alphabet-dependent bound (Singleton oracle)",
    "corollary1": "shortening bound, Singleton closed form",
    "theorem2_d": "shortening bound on d, s-sweep",
    "theorem2_k": "shortening bound on k, s-sweep at the given d",
    "rate_cap": "rate cap R*(r,t) times n",
}

