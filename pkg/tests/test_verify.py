import json

import pytest

from nazeta import verify
from nazeta.fields import Q


def test_suite_table_covers_every_check_once():
    assert verify.SUITES["all"] == (verify.SUITES["identities"] + verify.SUITES["zeros"]
                                    + verify.SUITES["lattice"] + verify.SUITES["eisenstein"])
    assert len(set(verify.SUITES["all"])) == len(verify.SUITES["all"])


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run_suite("nope")


def test_seeded_checks_are_reproducible():
    a = verify.check_functional_equation(seed=3, digits=25, count=5, fields=(Q,))
    b = verify.check_functional_equation(seed=3, digits=25, count=5, fields=(Q,))
    assert a == b and a.passed and a.cases == 5


def test_summary_document_shape():
    doc = verify.run_suite("lattice", seed=1)
    assert list(doc) == ["schema", "suite", "seed", "digits", "passed", "first_counterexample", "checks"]
    json.dumps(doc)  # serialisable as is
    check = doc["checks"][0]
    assert check["criterion"] == 7 and isinstance(check["worst"], str)


def test_tracker_keeps_first_failure():
    t = verify._Tracker("1e-10")
    t.add("1e-12", {"i": 0})
    t.add("1e-5", {"i": 1})
    t.add("1e-3", {"i": 2})
    r = t.result("x", 0, 10)
    assert not r.passed and r.counterexample["i"] == 1 and r.worst == "0.001"
