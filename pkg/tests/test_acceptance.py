"""One test per acceptance criterion; each prints a PASS/FAIL line."""

import pytest

from poincare import acceptance


@pytest.fixture
def report(capsys):
    def emit(result):
        with capsys.disabled():
            print("\n" + result.line())
        assert result.passed, result.detail
    return emit


def test_criterion_01_oracle_equivalence(report):
    report(acceptance.check_oracle_equivalence())


def test_criterion_02_weight_limit(report):
    report(acceptance.check_weight_limit())


def test_criterion_03_level_limit(report):
    report(acceptance.check_level_limit())


def test_criterion_04_siegel_orthogonality(report):
    report(acceptance.check_siegel())


def test_criterion_05_coset_enumeration(report):
    report(acceptance.check_cosets())


def test_criterion_06_gottschling_and_y0(report):
    report(acceptance.check_gottschling())


def test_criterion_07_lemma_machinery(report):
    report(acceptance.check_lemma())


def test_criterion_08_automorphism_counts(report):
    report(acceptance.check_aut())


def test_criterion_09_eigenvalue_pipeline(report):
    report(acceptance.check_hecke())


def test_criterion_10_determinism(report):
    report(acceptance.check_determinism())
