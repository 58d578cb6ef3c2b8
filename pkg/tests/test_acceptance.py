"""Acceptance run: one exact suite per criterion, each printing a PASS/FAIL line.

The lines are also collected and repeated in the terminal summary so they
show up without ``-s``.
"""
import random

import pytest

from hahnheun import heunhahn, suites

SEED = 0
RESULTS: list[str] = []

CRITERIA = [
    ("1", "degree raising, 50 samples, N = 10", suites.suite_degree_raising),
    ("2", "three-band expansion in the falling-factorial basis", suites.suite_pochhammer_tridiag),
    ("3", "Hahn polynomials are eigenfunctions of Y", suites.suite_hahn_eigen),
    ("4", "bilinear combination equals the closed-form operator", suites.suite_bilinear),
    ("5", "three-band expansion in the Hahn basis", suites.suite_hahn_tridiag),
    ("6", "Hahn algebra with the closed-form constants", suites.suite_hahn_algebra),
    ("7", "Heun-Racah structure constants and e1, e2", suites.suite_heun_racah),
    ("8", "degeneration to Racah and the equitable triple", suites.suite_degeneration_triple),
    ("9", "differential realization orders and leading terms", suites.suite_differential),
    ("10", "generalized eigenvalue problem for U_n", suites.suite_gevp),
    ("11", "truncation to an invariant polynomial subspace", suites.suite_qes),
]


def record(number: str, label: str, check: suites.Check) -> None:
    line = f"criterion {number:>2}: {'PASS' if check.passed else 'FAIL'}  {label}"
    if not check.passed:
        line += f"  [{check.status}: {check.observed}]"
    print(line)
    RESULTS.append(line)


@pytest.mark.parametrize("number,label,suite", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(number, label, suite):
    check = suites.run_criterion(suite, SEED + int(number))
    record(number, label, check)
    assert check.passed, check.to_json()


def test_criterion_12_mutation_sensitivity():
    check = suites.suite_mutation(SEED)
    record("12", "every perturbed closed form is caught by some suite", check)
    assert check.passed, check.to_json()


def test_truncation_needs_the_top_coefficient_of_the_block():
    """Vanishing of the next coefficient up does not close degree <= M."""
    rng = random.Random(SEED)
    N, M = 8, 2
    p = heunhahn.engineer_qes_params(N, M + 1, rng)
    assert heunhahn.sigma1(p, N, M + 1) == 0
    assert heunhahn.sigma1(p, N, M) != 0
    with pytest.raises(heunhahn.TruncationError):
        heunhahn.qes_truncate(p, N, M)
    # the block itself is not closed: W phi_M has a phi_{M+1} component
    image = heunhahn.PochhammerBasis(N).expand(
        heunhahn.build_heun_hahn(p, N).apply_poly(heunhahn.PochhammerBasis(N)[M]))
    assert image[M + 1] != 0
