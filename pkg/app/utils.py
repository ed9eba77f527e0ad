# utils.py

from flask import request, jsonify
from functools import wraps
import logging
import os
import sys
from dotenv import load_dotenv

from config import DEFAULT_CONFIGS

load_dotenv()

def getenv_bool(name: str, default: bool = False) -> bool:
    return os.getenv(name, str(default)).lower() in ("yes", "y", "true", "1", "t")

def getenv_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ZipInputError(f"{name} must be an integer, got {raw!r}")


class ZipInputError(ValueError):
    """Malformed or mathematically invalid input (CLI exit code 2)."""


class ResourceLimitError(RuntimeError):
    """A configured enumeration or volume guard was exceeded (CLI exit code 3)."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; always a defect, never user error."""


API_KEY = os.getenv('API_KEY', DEFAULT_CONFIGS["API_KEY"])
REQUIRE_API_KEY = getenv_bool('REQUIRE_API_KEY', DEFAULT_CONFIGS["REQUIRE_API_KEY"])
DETAILED_ERROR_LOGGING = getenv_bool('DETAILED_ERROR_LOGGING', DEFAULT_CONFIGS["DETAILED_ERROR_LOGGING"])
DEBUG_ENUMERATION = getenv_bool('DEBUG_ENUMERATION', DEFAULT_CONFIGS["DEBUG_ENUMERATION"])
LOG_LEVEL = os.getenv('LOG_LEVEL', DEFAULT_CONFIGS["LOG_LEVEL"]).upper()

ENUMERATION_LIMIT = getenv_int('ZIPCOX_LIMIT', DEFAULT_CONFIGS["ENUMERATION_LIMIT"])
HILBERT_VOLUME_LIMIT = getenv_int('ZIPCOX_HILBERT_LIMIT', DEFAULT_CONFIGS["HILBERT_VOLUME_LIMIT"])
CONE_RANK_LIMIT = DEFAULT_CONFIGS["CONE_RANK_LIMIT"]

_LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def get_logger(name: str, stream=None) -> logging.Logger:
    # stdout is reserved for JSON/DOT output, so library loggers default to stderr
    logger = logging.getLogger(name)
    if getattr(logger, "_zipcox_configured", False):
        return logger
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(_LOG_FORMAT))
    logger.handlers = []
    logger.propagate = False
    logger.setLevel(logging.DEBUG if DEBUG_ENUMERATION else getattr(logging, LOG_LEVEL, logging.INFO))
    logger.addHandler(handler)
    logger._zipcox_configured = True
    return logger


def require_api_key(f):
    @wraps(f)
    def decorated_function(*args, **kwargs):
        if not REQUIRE_API_KEY:
            return f(*args, **kwargs)
        auth_header = request.headers.get('Authorization')
        if not auth_header or not auth_header.startswith('Bearer '):
            return jsonify({"error": "Missing or invalid API key"}), 401
        token = auth_header.split('Bearer ')[1]
        if token != API_KEY:
            return jsonify({"error": "Invalid API key"}), 401
        return f(*args, **kwargs)
    return decorated_function
