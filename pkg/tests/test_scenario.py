"""Scenario file parsing, validation, canonical serialization."""

import numpy as np
import pytest

import dmabeam as db
from dmabeam import ScenarioError


def test_empty_text_gives_defaults():
    s = db.parse_scenario("")
    assert s == db.Scenario()
    assert s.n_y == 8 and s.n_z == 4
    assert s.f_min == 12.0 and s.f_max == 18.0
    assert s.q_factor == 50.0 and s.gamma is None
    assert s.delta == 0.5


def test_comments_and_blank_lines_ignored():
    text = "# heading\n\n  design.n_y = 12  # trailing note\n"
    assert db.parse_scenario(text).n_y == 12


def test_round_trip_is_exact():
    text = """
design.n_y = 6
design.n_z = 2
design.f_min = 10
design.f_max = 20
budget.subcarriers = 32
training.delta = 0.25
sweep.bandwidths = 0.1, 0.2
design.attenuation = on
"""
    s = db.parse_scenario(text)
    assert db.parse_scenario(db.scenario_to_text(s)) == s


def test_si_accessors_convert_boundary_units():
    s = db.parse_scenario("design.f_min = 10\ndesign.f_max = 20\n")
    assert s.f_min_hz == 10e9
    assert s.f_center_hz == 15e9
    assert s.damping_hz == pytest.approx(2 * np.pi * 15e9 / 50, rel=1e-12)
    assert s.phi_lower_rad == pytest.approx(np.radians(-30.0), rel=1e-12)


def test_gamma_replaces_quality_factor():
    s = db.parse_scenario("design.gamma = 2.0\n")
    assert s.q_factor is None
    assert s.damping_hz == pytest.approx(2e9, rel=1e-12)
    with pytest.raises(ScenarioError):
        db.parse_scenario("design.gamma = 2.0\ndesign.q_factor = 40\n")


def test_delta_accepts_db_suffix():
    s = db.parse_scenario("training.delta = 3 dB\n")
    assert s.delta == pytest.approx(10 ** (-0.3), rel=1e-12)
    s = db.parse_scenario("training.delta = 0.6 dB\n")
    assert s.delta == pytest.approx(10 ** (-0.06), rel=1e-12)


def test_delta_validation():
    for bad in ("0", "1", "-0.2", "1.3", "-3 dB"):
        with pytest.raises(ScenarioError):
            db.parse_scenario(f"training.delta = {bad}\n")


def test_unknown_key_reports_line_number():
    with pytest.raises(ScenarioError, match="line 2"):
        db.parse_scenario("design.n_y = 8\nbogus.key = 1\n")


def test_duplicate_key_rejected():
    with pytest.raises(ScenarioError, match="duplicate"):
        db.parse_scenario("design.n_y = 8\ndesign.n_y = 9\n")


def test_malformed_line_rejected():
    with pytest.raises(ScenarioError):
        db.parse_scenario("design.n_y 8\n")
    with pytest.raises(ScenarioError):
        db.parse_scenario("design.n_y = eight\n")


def test_sector_ordering_enforced():
    with pytest.raises(ScenarioError):
        db.parse_scenario("sector.phi_lower = 20\nsector.phi_upper = -20\n")


def test_groups_must_divide_waveguides():
    with pytest.raises(ScenarioError):
        db.parse_scenario("design.n_z = 4\ntraining.groups = 3\n")
    s = db.parse_scenario("design.n_z = 4\ntraining.groups = 2\n")
    assert s.groups == 2


def test_onoff_values():
    assert db.parse_scenario("design.attenuation = on\n").attenuation is True
    assert db.parse_scenario("design.attenuation = off\n").attenuation is False
    with pytest.raises(ScenarioError):
        db.parse_scenario("design.attenuation = maybe\n")


def test_fingerprint_tracks_content():
    a = db.fingerprint(db.parse_scenario(""))
    b = db.fingerprint(db.parse_scenario("design.n_y = 9\n"))
    assert a != b
    assert len(a) == 12
    assert a == db.fingerprint(db.parse_scenario("# just a comment\n"))


def test_auto_fields_parse_and_serialize():
    s = db.parse_scenario("design.d_y = auto\ndesign.n_g = auto\n")
    assert s.d_y == "auto" and s.n_g == "auto"
    explicit = db.parse_scenario("design.d_y = 0.009\n")
    assert explicit.d_y == 0.009
    assert "design.d_y = 0.009" in db.scenario_to_text(explicit)
