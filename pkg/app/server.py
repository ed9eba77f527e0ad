# server.py
import os

# Tests spawn this process with ZIPCOX_TEST_MODE=1. Skip OpenTelemetry auto-instrumentation
# at import time; it pulls a large dependency graph and slows startup.
if os.environ.get("ZIPCOX_TEST_MODE") != "1":
    # Configure trace context propagation BEFORE auto-instrumentation (production / normal runs).
    from opentelemetry.propagate import set_global_textmap
    from opentelemetry.trace.propagation.tracecontext import TraceContextTextMapPropagator

    set_global_textmap(TraceContextTextMapPropagator())

    from opentelemetry.instrumentation.auto_instrumentation import initialize

    initialize()

import logging
import sys
import traceback
from urllib.parse import parse_qsl, urlencode

from flask import Flask, jsonify, request
from gevent.pywsgi import WSGIServer

from cli import (CONE_KINDS, bundled_names, cone_document, describe_document, hasse_document, parse_int_weight,
                 read_document, strata_document, u3_decompose_document, u3_dim_document, verify_document,
                 zip_from_document)
from config import DEFAULT_CONFIGS, VERSION
from utils import (DETAILED_ERROR_LOGGING, ENUMERATION_LIMIT, InvariantViolation, ResourceLimitError, ZipInputError,
                   getenv_bool, require_api_key)

app = Flask(__name__)

# Configure stdout logging for incoming HTTP requests
handler = logging.StreamHandler(sys.stdout)
handler.setLevel(logging.INFO)
formatter = logging.Formatter('%(asctime)s %(levelname)s %(name)s: %(message)s')
handler.setFormatter(formatter)
# Replace existing handlers so logs are predictable in containers/tests
app.logger.handlers = []
app.logger.propagate = False
app.logger.setLevel(logging.INFO)
app.logger.addHandler(handler)

PORT = int(os.getenv('PORT', str(DEFAULT_CONFIGS["PORT"])))
MAX_TRIALS = 10 * DEFAULT_CONFIGS["DEFAULT_TRIALS"]


@app.before_request
def log_request_info():
    try:
        query = request.query_string.decode('utf-8') if request.query_string else ''
        # Redact token from query string when building the logged URL
        if query:
            parsed_qs = parse_qsl(query, keep_blank_values=True)
            redacted_qs = [(k, ('<REDACTED>' if k.lower() == 'token' else v)) for k, v in parsed_qs]
            safe_full_url = f"{request.path}?{urlencode(redacted_qs, doseq=True)}"
        else:
            safe_full_url = request.path

        body = request.get_json(silent=True)
        body_params = {}
        if isinstance(body, dict):
            if 'bundled' in body:
                body_params['bundled'] = body.get('bundled')
            if 'datum' in body:
                body_params['datum'] = 'inline'
            for key in ('lambda', 'p', 'case', 'trials'):
                if key in body:
                    body_params[key] = body.get(key)
        app.logger.info("HTTP %s %s params=%s remote=%s", request.method, safe_full_url, body_params,
                        request.remote_addr)
    except Exception:
        app.logger.exception("Failed to log incoming request")


def _error_response(e: Exception):
    if isinstance(e, ZipInputError):
        return jsonify({"error": str(e)}), 400
    if isinstance(e, ResourceLimitError):
        return jsonify({"error": str(e)}), 413
    details = str(e)
    if DETAILED_ERROR_LOGGING:
        app.logger.error("Request failed: %s\n%s", e, traceback.format_exc())
    if isinstance(e, InvariantViolation):
        details = f"internal invariant violated: {e}"
    return jsonify({"error": "An internal server error occurred", "details": details}), 500


def _body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ZipInputError("request body must be a JSON object")
    return data


def _datum_from_body(data: dict):
    """Returns (zip datum, datum document) for {"datum": {...}} or {"bundled": name}."""
    if 'datum' in data:
        doc = data['datum']
        if not isinstance(doc, dict):
            raise ZipInputError("'datum' must be a JSON object")
    elif 'bundled' in data:
        name = str(data['bundled'])
        if name.removesuffix('.json') not in bundled_names():
            raise ZipInputError(f"unknown bundled datum {name!r}")
        doc = read_document(name)
    else:
        raise ZipInputError("Missing 'datum' or 'bundled' in request body")
    return zip_from_document(doc), doc


def _weight(data: dict) -> tuple[int, ...]:
    value = data.get('lambda')
    if value is None:
        raise ZipInputError("Missing 'lambda' in request body")
    if isinstance(value, str):
        return parse_int_weight(value)
    return parse_int_weight(",".join(str(a) for a in value))


_MISSING = object()


def _int_field(data: dict, key: str, default=_MISSING):
    if key not in data or data[key] is None:
        if default is _MISSING:
            raise ZipInputError(f"Missing '{key}' in request body")
        return default
    value = data[key]
    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise ZipInputError(f"'{key}' must be an integer, got {value!r}")
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ZipInputError(f"'{key}' must be an integer, got {value!r}")


@app.route('/health', methods=['GET'])
def health():
    return jsonify({"status": "ok", "version": VERSION, "bundled": bundled_names()})


@app.route('/v1/describe', methods=['POST'])
@require_api_key
def describe():
    try:
        zip_datum, doc = _datum_from_body(_body())
        return jsonify(describe_document(zip_datum, doc))
    except Exception as e:
        return _error_response(e)


@app.route('/v1/strata', methods=['POST'])
@require_api_key
def strata():
    try:
        zip_datum, _ = _datum_from_body(_body())
        return jsonify(strata_document(zip_datum))
    except Exception as e:
        return _error_response(e)


@app.route('/v1/cones/<which>', methods=['POST'])
@require_api_key
def cones(which):
    if which not in CONE_KINDS:
        return jsonify({"error": f"unknown cone {which!r}"}), 404
    try:
        data = _body()
        zip_datum, _ = _datum_from_body(data)
        return jsonify(cone_document(zip_datum, which, bool(data.get('hilbert', False))))
    except Exception as e:
        return _error_response(e)


@app.route('/v1/hasse-check', methods=['POST'])
@require_api_key
def hasse_check():
    try:
        data = _body()
        zip_datum, doc = _datum_from_body(data)
        return jsonify(hasse_document(zip_datum, _weight(data), doc))
    except Exception as e:
        return _error_response(e)


@app.route('/v1/u3/dim', methods=['POST'])
@require_api_key
def u3_dim():
    try:
        data = _body()
        return jsonify(u3_dim_document(_weight(data), _int_field(data, 'p')))
    except Exception as e:
        return _error_response(e)


@app.route('/v1/u3/decompose', methods=['POST'])
@require_api_key
def u3_decompose():
    try:
        data = _body()
        return jsonify(u3_decompose_document(_weight(data), _int_field(data, 'p'), _int_field(data, 'i', None)))
    except Exception as e:
        return _error_response(e)


@app.route('/v1/verify-equivariance', methods=['POST'])
@require_api_key
def verify_equivariance():
    try:
        data = _body()
        trials = _int_field(data, 'trials', DEFAULT_CONFIGS["DEFAULT_TRIALS"])
        if not 0 < trials <= MAX_TRIALS:
            raise ZipInputError(f"'trials' must be between 1 and {MAX_TRIALS}")
        weight = _weight(data) if 'lambda' in data else None
        return jsonify(verify_document(
            data.get('case', 'inert'),
            _int_field(data, 'p'),
            _int_field(data, 'degree', DEFAULT_CONFIGS["DEFAULT_FIELD_DEGREE"]),
            trials,
            _int_field(data, 'seed', DEFAULT_CONFIGS["DEFAULT_SEED"]),
            data.get('section'),
            weight,
            bool(data.get('torus_only', False)),
        ))
    except Exception as e:
        return _error_response(e)


print(f" zipcox: sections and cones on stacks of G-zips")
print(f" Version: {VERSION}")
print(f" ")
print(f" * Server running on http://localhost:{PORT}")
print(f" * Bundled data: {', '.join(bundled_names())}")
print(f" * Enumeration limit: {ENUMERATION_LIMIT}")
print(f" ")

if __name__ == '__main__':
    # Check if debug mode is enabled via environment variable
    flask_debug = getenv_bool('FLASK_DEBUG', False) or os.getenv('FLASK_ENV') == 'development'

    if flask_debug:
        print(f" * Flask Debug Mode: ENABLED")
        print(f" * Auto-reload: ENABLED")
        app.run(host='0.0.0.0', port=PORT, debug=True, threaded=False)
    else:
        # Silence gevent's per-request access logs to keep test output compact
        http_server = WSGIServer(('0.0.0.0', PORT), app, log=None)
        http_server.serve_forever()
