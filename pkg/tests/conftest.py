import os
import sys

import pytest

# Library modules live flat in app/ and import each other by bare name
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), 'app'))

import _test_helpers as helpers

try:
    from rich.console import Console
    from rich.table import Table
    from rich.text import Text
except Exception:
    Console = None
    Table = None
    Text = None


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running tests (large scans, full equivariance suites)")


def pytest_runtest_makereport(item, call):
    # After the test call phase, if the test failed, print any stored expected/actual comparison.
    if call.when == "call" and call.excinfo is not None:
        last = helpers.get_last_mismatch()
        if last:
            label, expected, actual = last
            console = Console(file=sys.__stdout__) if Console else None
            if console and Table and Text:
                table = Table(title=label, show_header=True, header_style="bold magenta")
                table.add_column("Key")
                table.add_column("Expected", overflow="fold")
                table.add_column("Actual", overflow="fold")
                for key in sorted(set(expected) | set(actual)):
                    want, got = expected.get(key), actual.get(key)
                    if key in expected and want != got:
                        table.add_row(key, Text(repr(want), style="green"), Text(repr(got), style="red"))
                    else:
                        table.add_row(key, repr(want) if key in expected else "", repr(got))
                console.print(table)
            else:
                sys.__stdout__.write(f"{label}\n")
                for key in sorted(expected):
                    sys.__stdout__.write(f"  {key}: expected {expected[key]!r}, got {actual.get(key)!r}\n")
            helpers.clear_last_mismatch()


@pytest.fixture
def bundled():
    """Load a bundled datum document and its zip datum by name."""
    from cli import read_document, zip_from_document

    def load(name: str):
        doc = read_document(name)
        return zip_from_document(doc), doc

    return load
