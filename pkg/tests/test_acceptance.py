"""Acceptance criteria 1-8 at their stated sizes, one pass/fail line each.

The lines are printed as the tests run and collected again in the terminal
summary.  Set CURVCERT_JOBS to spread the larger batteries over processes.
"""
import os

import pytest

from curvcert import battery

CFG = battery.BatteryConfig(seed=42, jobs=int(os.environ.get("CURVCERT_JOBS", "1")))


@pytest.fixture(scope="module")
def routes():
    return battery.route_and_weyl(CFG)


def _report(result, log):
    line = result.line()
    log.append(line)
    print(line)
    assert result.passed, f"{line}\nfailures: {result.failures[:5]}"


def test_criterion_sizes_meet_the_minimums():
    assert CFG.route_count >= 100
    assert CFG.cert_n4 >= 100 and CFG.cert_n8 >= 25
    assert CFG.minor_count >= 50
    assert CFG.structural_count >= 100


def test_criterion_1_route_equality(routes, acceptance_log):
    _report(routes[0], acceptance_log)
    assert routes[0].seconds < 60


def test_criterion_2_weyl_equality(routes, acceptance_log):
    _report(routes[1], acceptance_log)


def test_criterion_3_vanishing_certificates(acceptance_log):
    _report(battery.certificates(CFG), acceptance_log)


def test_criterion_4_non_vacuity(acceptance_log):
    _report(battery.non_vacuity(CFG), acceptance_log)


def test_criterion_5_petrov_battery(acceptance_log):
    _report(battery.petrov_battery(CFG), acceptance_log)


def test_criterion_6_topology_integers(acceptance_log):
    _report(battery.topology(CFG), acceptance_log)


def test_criterion_7_appendix_cross_checks(acceptance_log):
    _report(battery.appendix(CFG), acceptance_log)


def test_criterion_8_structural_identities(acceptance_log):
    _report(battery.structural(CFG), acceptance_log)
