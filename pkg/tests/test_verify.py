"""Tests for the verification suites."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from arcticl.config import ConfigError
from arcticl.curve.regime import regime_params, solve_eta_ab
from arcticl.verify import (
    SUITES,
    CheckResult,
    VerificationFailed,
    VerifyOptions,
    VerifyReport,
    calibration_error,
    figure_geometry,
    frequency_scores,
    oracle_cases,
    resolve_suites,
    round_trip_error,
    run_suites,
    verify_curve_document,
)


def _failures(report: VerifyReport) -> list[str]:
    return [f"{c.name}: {c.measured} > {c.tolerance} ({c.detail})" for c in report.failures]


class TestSuiteSelection:
    def test_all_expands_in_order(self) -> None:
        assert resolve_suites(["all"]) == list(SUITES)

    def test_duplicates_collapse(self) -> None:
        assert resolve_suites(["sextic", "oracle", "sextic"]) == ["sextic", "oracle"]

    def test_unknown(self) -> None:
        with pytest.raises(ConfigError, match="unknown suite"):
            resolve_suites(["bogus"])


class TestReport:
    def test_passed_and_failures(self) -> None:
        report = VerifyReport(
            [CheckResult("a", "ok", True, 0.0, 1.0), CheckResult("a", "bad", False, 2.0, 1.0)]
        )
        assert not report.passed
        assert [c.name for c in report.failures] == ["bad"]
        assert len(report.suite("a")) == 2
        assert report.to_dict()["failed"] == 1

    def test_raise_for_failures(self) -> None:
        report = VerifyReport([CheckResult("oracle", "bad", False)])
        with pytest.raises(VerificationFailed, match="oracle/bad") as info:
            report.raise_for_failures()
        assert info.value.report is report

    def test_clean_report_does_not_raise(self) -> None:
        VerifyReport([CheckResult("oracle", "ok", True)]).raise_for_failures()


class TestOracleCases:
    def test_cases_are_admissible_with_a_cut(self) -> None:
        cases = oracle_cases()
        assert (2, 1, 1) in cases
        assert (5, 2, 3) not in cases
        assert all(1 <= s <= r and r + s <= N for N, r, s in cases)

    def test_oracle_suite(self) -> None:
        report = run_suites(["oracle"])
        assert report.passed, _failures(report)
        assert len(report.suite("oracle")) == 9


class TestCurveIdentities:
    def test_round_trip(self) -> None:
        worst, checked = round_trip_error(solve_eta_ab(1.5, 0.4, 0.3), -1)
        assert checked > 0
        assert worst < 1e-10

    def test_round_trip_regime_one(self) -> None:
        worst, checked = round_trip_error(regime_params(8.0, 0.0, 0.5), -1)
        assert checked > 0
        assert worst < 1e-10

    def test_suite(self) -> None:
        report = run_suites(["curve-identities"])
        assert report.passed, _failures(report)


class TestSextic:
    @pytest.mark.parametrize("seed", [0, 7])
    def test_suite(self, seed: int) -> None:
        report = run_suites(["sextic"], VerifyOptions(seed=seed))
        assert report.passed, _failures(report)
        assert "sextic" in report.elapsed


class TestShuffling:
    @pytest.mark.parametrize("alpha", [Fraction(1, 3), Fraction(3, 4)])
    def test_calibration(self, alpha: Fraction) -> None:
        assert calibration_error(3, 2, 1, alpha) <= 1e-12
        assert calibration_error(4, 2, 2, alpha) <= 1e-12

    def test_frequency_scores(self) -> None:
        p = np.array([0.5, 0.0, 1.0, 0.0])
        freq = np.array([0.5, 0.0, 1.0, 0.01])
        scores = frequency_scores(freq, p, 100)
        np.testing.assert_array_equal(scores[:3], [0.0, 0.0, 0.0])
        assert np.isinf(scores[3])
        assert frequency_scores(np.array([0.6]), np.array([0.5]), 100)[0] == pytest.approx(2.0)

    def test_suite_small(self) -> None:
        report = run_suites(["shuffling"], VerifyOptions(sample_N=8, samples=20_000, seed=1))
        assert report.passed, _failures(report)
        names = [c.name for c in report.checks]
        assert "frequencies within 3 sigma at N=8" in names


class TestFigures:
    def test_geometry(self) -> None:
        assert figure_geometry(300) == (300, 168, 132)
        N, r, s = figure_geometry(50)
        assert r + s == N and s == 22

    @pytest.mark.slow
    def test_full_size(self) -> None:
        report = run_suites(["figures"])
        assert report.passed, _failures(report)


class TestCurveDocument:
    def test_malformed(self) -> None:
        with pytest.raises(ConfigError, match="not a curve document"):
            verify_curve_document({"branches": []})

    def test_missing_branch(self) -> None:
        doc = {
            "metadata": {"config": {"R": 1.5, "Q": 0.0, "alpha": "0.3", "n_curve": 100}},
            "branches": [],
        }
        assert not verify_curve_document(doc).passed
