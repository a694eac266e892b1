"""Configuration and constants for the R-infinity decision library."""

import os
from pathlib import Path

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_int(name: str, default: int) -> int:
    """Read an integer override from the environment."""
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


# Output directory for exported tables (only written when --csv is given)
DATA_DIR = Path(__file__).parent.parent.parent / "data"

# Logging
LOG_LEVEL = os.getenv("RINF_LOG_LEVEL", "WARNING").upper()
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Brute-force conjugator search: maximal word length in {S, T, T^-1, D}
ORACLE_BOUND = _env_int("RINF_ORACLE_BOUND", 8)

# Finite-quotient oracle limits
ORACLE_MAX_MODULUS = _env_int("RINF_ORACLE_MAX_MODULUS", 50)
FINITE_GROUP_LIMIT = _env_int("RINF_FINITE_GROUP_LIMIT", 4096)

# Associativity is checked on every triple up to this order, sampled above it
ASSOCIATIVITY_FULL_CHECK = 48
ASSOCIATIVITY_SAMPLES = 20_000

# Fallback bound for the exhaustive unit search in the commutant lattice
UNIT_SEARCH_LIMIT = _env_int("RINF_UNIT_SEARCH_LIMIT", 1_000_000)

# Quaternion sampling for the mapping-torus identity checks
APPENDIX_SAMPLES = _env_int("RINF_APPENDIX_SAMPLES", 100)
APPENDIX_SEED = _env_int("RINF_APPENDIX_SEED", 0)
UNIT_NORM_TOLERANCE = 1e-9
COMPOSITION_TOLERANCE = 1e-12
