import os
from pathlib import Path

import pytest
from hypothesis import settings

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=60)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))

DATA = Path(__file__).resolve().parent.parent / "src" / "ptri" / "data"


@pytest.fixture(scope="session")
def dim4_enumeration():
    from ptri.enumeration import local_enumerate

    return local_enumerate(4)


@pytest.fixture(scope="session")
def dim5_archive():
    from ptri.io import read_archive

    path = DATA / "dim5_closure.ptri.gz"
    if not path.exists():
        pytest.skip("stored dim-5 archive missing")
    return read_archive(path)


#: lines collected by the acceptance suite, printed after the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
