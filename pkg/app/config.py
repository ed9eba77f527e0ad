# config.py

import os

# Get version from environment variable (set by the release build) or use default
VERSION = os.getenv('APP_VERSION', 'dev')

DEFAULT_CONFIGS = {
    # Server settings
    "PORT": 5050,
    "API_KEY": 'your_api_key_here',  # Fallback API key

    # Enumeration guards (ZIPCOX_LIMIT / ZIPCOX_HILBERT_LIMIT override)
    "ENUMERATION_LIMIT": 10 ** 6,  # Roots and Weyl elements
    "HILBERT_VOLUME_LIMIT": 10 ** 6,  # Lattice points across all parallelepipeds
    "CONE_RANK_LIMIT": 12,  # Ambient rank accepted by the double description

    # Finite-field harness
    "MAX_FIELD_DEGREE": 12,
    "DEFAULT_FIELD_DEGREE": 6,
    "DEFAULT_TRIALS": 100,
    "DEFAULT_SEED": 42,

    # U(3) scans use boxes of radius U3_BOX_FACTOR * p * (p + 1)
    "U3_BOX_FACTOR": 3,

    # Feature flags
    "REQUIRE_API_KEY": True,
    "DETAILED_ERROR_LOGGING": True,
    "DEBUG_ENUMERATION": False,
    "LOG_LEVEL": 'INFO',
}
