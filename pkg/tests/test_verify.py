import json
import math

import pytest

from pseudohyp.spaces import ConfigurationError
from pseudohyp.submersions import ComplexHopf, OctonionicHopf, QuaternionicHopf, ThetaCircle, inject_fault
from pseudohyp.verify import (
    REGISTRY,
    CheckRecord,
    CheckSpec,
    VerificationReport,
    default_models,
    default_suite,
    run_check,
    run_suite,
    supported_models,
)


class TestCheckSpec:
    def test_unknown_name(self):
        with pytest.raises(ConfigurationError):
            CheckSpec("bogus", ComplexHopf(2))

    @pytest.mark.parametrize("kw", [{"samples": 0}, {"tol": 0.0}, {"tol": -1e-8}])
    def test_invariants(self, kw):
        with pytest.raises(ConfigurationError):
            CheckSpec("lemma3b", ComplexHopf(2), **kw)

    def test_defaults(self):
        spec = CheckSpec("lemma3b", ComplexHopf(2))
        assert (spec.effective_samples, spec.effective_tol, spec.seed) == (200, 1e-8, 42)
        assert CheckSpec("fd_a_tensor", ComplexHopf(2)).effective_tol == 1e-4


class TestRegistry:
    def test_named_checks_present(self):
        for name in ("lemma3b", "oneill_vi", "pinching", "special_plane", "clifford_vertical",
                     "t_zero", "l_dim", "volume_sign", "fibre_definite", "nabla_A_zero"):
            assert name in REGISTRY

    def test_anchors_and_functions(self):
        for name, check in REGISTRY.items():
            assert check.name == name and check.anchor and callable(check.fn)

    def test_indefinite_base_unsupported(self):
        for name in ("pinching", "fibre_definite", "special_plane", "lemma3c", "intertwiner"):
            assert not REGISTRY[name].supports(ThetaCircle(3, 1))

    def test_supported_models(self):
        labels = [m.label for m in supported_models("l_dim")]
        assert labels == ["complex-hopf", "quaternionic-hopf", "octonionic-hopf"]


class TestRunCheck:
    def test_example_lemma3b(self):
        rec = run_check(CheckSpec("lemma3b", QuaternionicHopf(2), 200, 1e-8, 42))
        assert rec.passed and rec.max_residual < 1e-8 and rec.samples == 200

    def test_example_special_plane(self):
        rec = run_check(CheckSpec("special_plane", ComplexHopf(3), 100, 1e-8, 7))
        assert rec.passed

    def test_example_l_dim(self):
        rec = run_check(CheckSpec("l_dim", OctonionicHopf(), 50, 1e-9, 1))
        assert rec.passed and rec.max_residual == 0

    def test_unsupported_pairing(self):
        with pytest.raises(ConfigurationError, match="unsupported: indefinite base"):
            run_check(CheckSpec("pinching", ThetaCircle(3, 3)))

    def test_deterministic(self):
        spec = CheckSpec("oneill_vi", QuaternionicHopf(1), 10)
        assert run_check(spec).max_residual == run_check(spec).max_residual

    def test_seed_matters(self):
        a = run_check(CheckSpec("oneill_vi", QuaternionicHopf(1), 10, seed=1)).max_residual
        b = run_check(CheckSpec("oneill_vi", QuaternionicHopf(1), 10, seed=2)).max_residual
        assert a != b

    def test_fault_detected_by_lemma3b(self):
        with inject_fault("metric_sign"):
            rec = run_check(CheckSpec("lemma3b", QuaternionicHopf(2), 20))
        assert not rec.passed


class TestRunSuite:
    def test_empty(self):
        report = run_suite([])
        assert report.passed and report.checks == []

    def test_order_and_errors_recorded(self):
        specs = [CheckSpec("t_zero", ComplexHopf(1), 5),
                 CheckSpec("pinching", ThetaCircle(2, 1), 5),
                 CheckSpec("lemma3a", ComplexHopf(1), 5)]
        report = run_suite(specs)
        assert [c.name for c in report.checks] == ["t_zero", "pinching", "lemma3a"]
        assert report.checks[1].error and not report.checks[1].passed
        assert report.checks[0].passed and report.checks[2].passed
        assert not report.passed

    def test_default_suite_skips_unsupported(self):
        specs = default_suite(checks=["pinching"])
        assert [s.model.label for s in specs] == [
            "complex-hopf", "quaternionic-hopf", "octonionic-hopf", "complex-to-quaternionic"]

    def test_default_suite_keeps_intrinsic_tolerances(self):
        specs = default_suite(tol=1e-9, checks=["fd_a_tensor", "lemma3b"])
        tols = {s.name: s.effective_tol for s in specs}
        assert tols == {"fd_a_tensor": 1e-4, "lemma3b": 1e-9}

    def test_default_suite_unknown_check(self):
        with pytest.raises(ConfigurationError):
            default_suite(checks=["nope"])

    def test_default_models(self):
        assert len(default_models()) == 5


class TestReport:
    def make(self):
        return run_suite(default_suite(samples=3, checks=["axiom_c", "l_dim"]), suite="unit")

    def test_json_round_trip(self):
        report = self.make()
        text = report.to_json()
        again = VerificationReport.from_dict(json.loads(text))
        assert again.to_dict() == report.to_dict()

    def test_schema_keys(self):
        d = self.make().to_dict()
        assert {"suite", "version", "seed", "checks", "pass"} <= set(d)
        for c in d["checks"]:
            assert set(c) >= {"name", "model", "params", "samples", "max_residual", "tol", "pass",
                              "paper_anchor"}

    def test_pass_iff_below_tolerance(self):
        for c in self.make().checks:
            discrete = REGISTRY[c.name].discrete
            expected = c.max_residual == 0 if discrete else c.max_residual < c.tol
            assert c.passed == expected

    def test_text_table(self):
        text = self.make().format_text()
        assert text.splitlines()[0].startswith("check")
        assert "passed in" in text.splitlines()[-1]

    def test_non_finite_residual_serialized_as_null(self):
        rec = CheckRecord("x", "m", {}, 1, None, 1e-8, False, "a", "boom")
        assert json.loads(json.dumps(rec.to_dict()))["max_residual"] is None

    def test_nan_residual_fails(self):
        rec = CheckRecord("x", "m", {}, 1, math.nan, 1e-8, False, "a")
        assert rec.to_dict()["max_residual"] is None and not rec.passed
