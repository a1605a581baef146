import json

import pytest

from dysonspin.spin import SPINS
from dysonspin.verify import CHECKS, ConfigError, RunConfig, run_verification


@pytest.mark.parametrize("s", SPINS)
def test_default_suite_passes_for_every_spin(s):
    rep = run_verification(RunConfig(spin=s, gamma=-0.45, c2=0.7, c3=-1.1, tmax=3.0))
    assert rep.summary, [c for c in rep.checks if not c.passed]
    assert all(c.anchor == CHECKS[c.name][0] for c in rep.checks)


def test_summary_is_conjunction():
    rep = run_verification(RunConfig(tmax=1.0, tolerances={"unitarity": 1e-30}))
    assert not rep.summary
    assert [c.name for c in rep.checks if not c.passed] == ["unitarity"]


def test_exceptional_point_and_negative_branch_fail():
    rep = run_verification(RunConfig(gamma=1.0))
    assert not rep.summary and "exceptional" in rep.checks[1].notes
    rep = run_verification(RunConfig(branch=-1, tmax=1.0))
    assert not rep.summary
    bad = rep.checks[-1]
    assert bad.name == "dyson-relation" and "undefined" in bad.notes
    assert json.loads(json.dumps(rep.as_dict()))["checks"][-1]["residual"] is None


def test_tolerance_defaults_and_overrides():
    cfg = RunConfig(tolerances={"fd": 1e-5, "overlap": 1e-3})
    assert cfg.tol("spectrum") == 1e-9
    assert cfg.tol("dyson-relation") == 1e-5
    assert cfg.tol("overlap") == 1e-3


@pytest.mark.parametrize("kw", [{"dt": 0}, {"tmax": -1}, {"spin": "5/2"}, {"branch": 0},
                                {"tolerances": {"fd": 0}}, {"tolerances": {"nope": 1}},
                                {"c1": 0}, {"expect": "maybe"}])
def test_invalid_config(kw):
    with pytest.raises(ConfigError):
        RunConfig(**kw).validate()


def test_printed_deviation_notes_are_reported():
    rep = run_verification(RunConfig(spin="3/2", tmax=1.0))
    note = next(c.notes for c in rep.checks if c.name == "printed-eta")
    assert "eta_16" in note and "printed-form residual" in note
