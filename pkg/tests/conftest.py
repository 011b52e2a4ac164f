import contextlib

import pytest

from zerosum.group import FiniteAbelianGroup


@pytest.fixture(scope="session")
def c4():
    return FiniteAbelianGroup([4])


@pytest.fixture(scope="session")
def c3sq():
    return FiniteAbelianGroup([3, 3])


# acceptance reporting --------------------------------------------------------------

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


class _Verdict:
    def __init__(self):
        self.ok = False
        self.detail = ""


@contextlib.contextmanager
def criterion(number, title):
    """Record one acceptance verdict; set ``.ok`` (and optionally ``.detail``) inside the block.

    An exception inside the block is logged as FAIL and re-raised.
    """
    verdict = _Verdict()
    try:
        yield verdict
    except BaseException as exc:
        _ACCEPTANCE[number] = (title, False, f"{type(exc).__name__}: {exc}")
        raise
    _ACCEPTANCE[number] = (title, verdict.ok, verdict.detail)
    assert verdict.ok, f"criterion {number} failed: {verdict.detail}"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, ok, detail = _ACCEPTANCE[number]
        tail = f"  ({detail})" if detail else ""
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {number}: {title}{tail}")
