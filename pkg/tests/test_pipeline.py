from __future__ import annotations

import json

import pytest

from ksforge.colorings import AlphabetError
from ksforge.pipeline import STAGES, StageFailed, run_pipeline


@pytest.fixture(scope="module")
def report():
    return run_pipeline("1/2")


def test_stage_order(report):
    assert [s.name for s in report.stages] == list(STAGES)


def test_failures_skip_later_stages(report):
    seen_fail = False
    for s in report.stages:
        if seen_fail:
            assert s.verdict == "SKIPPED"
        seen_fail |= s.verdict == "FAIL"
    assert report.ok == all(s.verdict == "PASS" for s in report.stages)


def test_gadget_stages_pass(report):
    for name in ("lip_a", "lip_b", "s1", "s2", "s3_angles", "s3_cases", "s3_minimal"):
        assert report.stage(name).verdict == "PASS", report.stage(name).details


def test_assembly_embeds_results(report):
    st = report.stage("assembly")
    assert st.verdict in ("PASS", "FAIL")
    assert set(st.details["results"]) == {"0,1/2,1"}
    assert st.details["counts"]["total"] == 150


def test_deterministic_modulo_timings(report):
    again = run_pipeline("1/2")

    def strip(d):
        # wall-clock fields aside, two runs agree
        for st in d["stages"]:
            for r in st["details"].get("results", {}).values():
                r.pop("seconds", None)
        return d

    a = strip(report.to_dict(timings=False))
    b = strip(again.to_dict(timings=False))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_bad_p_rejected_up_front():
    with pytest.raises(AlphabetError):
        run_pipeline("1/3")


def test_strict_mode_raises_on_failure(report):
    if report.ok:
        pytest.skip("nothing fails at p = 1/2")
    with pytest.raises(StageFailed):
        run_pipeline("1/2", strict=True)
