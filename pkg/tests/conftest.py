import pytest

from nodalcert import tables


def _scan(pipeline: str) -> dict:
    exp_min, _ = tables._expected_of(
        {"auto": "thm2", "w": "prop51", "uv": "prop52"}[pipeline]
    )
    return {g: tables.scan_row(g, pipeline) for g in sorted(exp_min)}


@pytest.fixture(scope="session")
def thm2_rows():
    return _scan("auto")


@pytest.fixture(scope="session")
def prop51_rows():
    return _scan("w")


@pytest.fixture(scope="session")
def prop52_rows():
    return _scan("uv")
