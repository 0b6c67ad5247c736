"""Acceptance gate: every shipped claim re-verified from scratch.

Each criterion from thermoform.reproduce runs as its own test so the
pytest report shows one pass/fail line per criterion; the human-readable
detail string is printed alongside.
"""

import pytest

from thermoform import reproduce

NAMES = [name for name, _ in reproduce.CRITERIA]


@pytest.mark.parametrize("name", NAMES)
def test_criterion(name, capsys):
    func = dict(reproduce.CRITERIA)[name]
    ok, detail = func()
    with capsys.disabled():
        print("\n%-34s %s  %s" % (name, "PASS" if ok else "FAIL", detail))
    assert ok, "%s: %s" % (name, detail)


def test_criteria_cover_all_twelve():
    assert len(reproduce.CRITERIA) == 12
    assert len(set(NAMES)) == 12
