import os
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest
import requests

import _test_helpers as _helpers

# Repo root for subprocess cwd (avoid Path.resolve() here: can hang on some VM/container mounts).
_PROJECT_ROOT = Path(__file__).parent.parent


def get_free_port():
    s = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    s.bind(("", 0))
    port = s.getsockname()[1]
    s.close()
    return port


def wait_for_server(port, timeout=10.0):
    url = f"http://127.0.0.1:{port}/health"
    deadline = time.time() + timeout
    while time.time() < deadline:
        try:
            r = requests.get(url, timeout=1.0)
            if r.status_code == 200:
                return True
        except Exception:
            pass
        time.sleep(0.2)
    return False


@pytest.fixture(scope="module")
def server():
    port = get_free_port()

    env = os.environ.copy()
    env["PORT"] = str(port)
    env["REQUIRE_API_KEY"] = "false"
    env["ZIPCOX_TEST_MODE"] = "1"
    env["FLASK_DEBUG"] = "0"

    proc = subprocess.Popen(
        [sys.executable, "-u", str(_PROJECT_ROOT / "app" / "server.py")],
        env=env,
        cwd=str(_PROJECT_ROOT),
        stdout=None,
        stderr=None,
    )
    try:
        assert wait_for_server(port, timeout=30.0), "Server did not start in time"
        yield f"http://127.0.0.1:{port}"
    finally:
        try:
            proc.terminate()
            proc.wait(timeout=5)
        except Exception:
            proc.kill()


def test_health_lists_bundled_data(server):
    r = requests.get(f"{server}/health", timeout=5.0)
    r.raise_for_status()
    data = r.json()
    assert data["status"] == "ok"
    assert "u3_inert" in data["bundled"]


def test_describe_bundled(server):
    r = requests.post(f"{server}/v1/describe", json={"bundled": "gl3_split"}, timeout=30.0)
    r.raise_for_status()
    data = r.json()
    expected = {"I": ["alpha1"], "Delta_P": ["alpha2"], "hasse_type": True, "weyl_order": 6}
    assert _helpers.compare_report("POST /v1/describe gl3_split", expected, data)


def test_describe_inline_datum(server):
    datum = {"p": 2, "rank": 1, "simple_roots": [[2]], "simple_coroots": [[1]], "sigma_char": [[1]], "mu": [1]}
    r = requests.post(f"{server}/v1/describe", json={"datum": datum}, timeout=30.0)
    r.raise_for_status()
    assert r.json()["delta"] == {"alpha1": ["-1"]}


def test_strata_and_cones(server):
    r = requests.post(f"{server}/v1/strata", json={"bundled": "c2_split"}, timeout=30.0)
    r.raise_for_status()
    assert len(r.json()["elements"]) == 4

    r = requests.post(f"{server}/v1/cones/pha", json={"bundled": "u3_inert"}, timeout=30.0)
    r.raise_for_status()
    assert sorted(r.json()["rays"]) == [[1, 0, 3], [4, 1, 3]]

    r = requests.post(f"{server}/v1/cones/nope", json={"bundled": "u3_inert"}, timeout=30.0)
    assert r.status_code == 404


def test_hasse_check(server):
    r = requests.post(f"{server}/v1/hasse-check", json={"bundled": "u3_inert", "lambda": [4, 4, 12]}, timeout=30.0)
    r.raise_for_status()
    data = r.json()
    assert data["mu_ordinary_hasse"] is True
    assert data["h0_exact"] == "true"


def test_u3_endpoints(server):
    r = requests.post(f"{server}/v1/u3/dim", json={"lambda": "4,4,12", "p": 3}, timeout=30.0)
    r.raise_for_status()
    assert r.json()["dim"] == 1

    r = requests.post(f"{server}/v1/u3/decompose", json={"lambda": [1, 0, 3], "p": 3, "i": 0}, timeout=30.0)
    r.raise_for_status()
    assert r.json()["decompositions"][0]["k1"] == 1


def test_verify_equivariance(server):
    payload = {"case": "inert", "p": 3, "degree": 2, "trials": 3, "section": "HaMu"}
    r = requests.post(f"{server}/v1/verify-equivariance", json=payload, timeout=60.0)
    r.raise_for_status()
    assert r.json()["passed"] is True


def test_input_errors_are_400(server):
    r = requests.post(f"{server}/v1/hasse-check", json={"bundled": "gl3_split", "lambda": [1, 0, 0]}, timeout=30.0)
    assert r.status_code == 400
    assert "not a character of L" in r.json()["error"]

    r = requests.post(f"{server}/v1/describe", json={"bundled": "missing"}, timeout=30.0)
    assert r.status_code == 400

    r = requests.post(f"{server}/v1/describe", data="not json", timeout=30.0)
    assert r.status_code == 400

    r = requests.post(f"{server}/v1/verify-equivariance", json={"p": 3, "trials": 0}, timeout=30.0)
    assert r.status_code == 400


@pytest.mark.parametrize("path, payload", [
    ("/v1/u3/decompose", {"lambda": [4, 4, 12], "p": 3, "i": "x"}),
    ("/v1/u3/dim", {"lambda": [4, 4, 12], "p": "three"}),
    ("/v1/verify-equivariance", {"p": 3, "trials": "many"}),
    ("/v1/verify-equivariance", {"p": 3, "degree": [2]}),
    ("/v1/verify-equivariance", {"p": 3, "seed": 1.5}),
])
def test_non_integer_fields_are_400(server, path, payload):
    r = requests.post(f"{server}{path}", json=payload, timeout=30.0)
    assert r.status_code == 400
    assert "must be an integer" in r.json()["error"]
