import json
import shutil
import subprocess
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
BIN = FIXTURES / "bin"
REMARKS = FIXTURES / "remarks"
SITES = FIXTURES / "sites"
REPORTS = FIXTURES / "reports"
ORACLE = FIXTURES / "oracle"
LISTINGS = FIXTURES / "listings"
SWEEPPROJ = FIXTURES / "sweepproj"
SRC = FIXTURES / "src"


def clang_available() -> bool:
    return shutil.which("clang") is not None


def clang_major() -> int | None:
    if not clang_available():
        return None
    out = subprocess.run(["clang", "--version"], capture_output=True, text=True).stdout
    for token in out.replace("version", "\n").split():
        if token and token[0].isdigit():
            return int(token.split(".")[0])
    return None


requires_toolchain = pytest.mark.skipif(
    not clang_available(), reason="clang not on PATH"
)


@pytest.fixture(scope="session")
def fixture_bin():
    def load(name: str) -> bytes:
        return (BIN / name).read_bytes()

    return load


@pytest.fixture(scope="session")
def micro_cases():
    return json.loads((FIXTURES / "micro_cases.json").read_text())


@pytest.fixture(scope="session")
def service_client():
    from fastapi.testclient import TestClient

    from inlinescope.service import create_app

    with TestClient(create_app()) as client:
        yield client
