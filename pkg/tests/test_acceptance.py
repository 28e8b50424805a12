"""Acceptance criteria 1-9; each test prints one PASS/FAIL line."""
import pytest

import acceptance as A


def report(capsys, result):
    with capsys.disabled():
        print("\n" + result.line())
        for f in result.findings[:10]:
            print(f"    finding: {f}")
    return result


@pytest.mark.parametrize("number", range(1, 10))
def test_criterion(number, capsys):
    result = report(capsys, A.ALL[number - 1]())
    assert result.passed, result.detail
