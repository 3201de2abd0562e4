"""Association probabilities, serving-distance densities and side geometry."""

import math

import numpy as np
import pytest
from scipy import integrate

from riscov.association import (
    assoc_prob_bs,
    assoc_prob_no_ris,
    assoc_prob_ris,
    assoc_prob_via_ris,
    bs_ris_distance,
    equivalent_los_distance,
    equivalent_nlos_distance,
    los_weighted_area,
    nearest_los_bs_pdf,
    nearest_los_ris_pdf,
    nlos_weighted_area,
    ris_joint_expectation,
    serving_bs_density,
    serving_bs_mixture_density,
    side_condition,
)
from riscov.propagation import LinkKind


def test_weighted_areas_match_quadrature(cfg):
    for x in (10.0, 120.0, 400.0):
        los_ref, _ = integrate.quad(lambda r: r * math.exp(-cfg.beta * r), 0.0, x)
        nlos_ref, _ = integrate.quad(
            lambda r: r * -math.expm1(-cfg.beta * r), 0.0, x
        )
        assert los_weighted_area(x, cfg.beta) == pytest.approx(los_ref, rel=1e-9)
        assert nlos_weighted_area(x, cfg.beta) == pytest.approx(nlos_ref, rel=1e-9)


def test_weighted_areas_sum_to_disk(cfg):
    # the LOS and NLOS weights partition integral_0^x r dr
    for x in (5.0, 250.0):
        total = los_weighted_area(x, cfg.beta) + nlos_weighted_area(x, cfg.beta)
        assert total == pytest.approx(0.5 * x**2, rel=1e-12)


def test_equivalent_distances_round_trip(cfg):
    for x in (2.0, 50.0, 300.0):
        z = equivalent_nlos_distance(x, cfg)
        assert equivalent_los_distance(z, cfg) == pytest.approx(x, rel=1e-9)
        # an equal-power NLOS link is much shorter than the LOS one
        assert z < x or x < 1.0


def test_nearest_los_bs_pdf_normalizes(cfg):
    total, _ = integrate.quad(
        lambda x: nearest_los_bs_pdf(x, cfg), 0.0, 2000.0, limit=200
    )
    # finite LOS intensity: total mass 1 - exp(-2 pi lambda / beta^2)
    expected = -math.expm1(-math.pi * cfg.lambda_bs * 2.0 / cfg.beta**2)
    assert total == pytest.approx(expected, rel=1e-6)


def test_serving_bs_masses(cfg):
    a_los = assoc_prob_bs(LinkKind.LOS, cfg)
    a_nlos = assoc_prob_bs(LinkKind.NLOS, cfg)
    assert 0.0 < a_los < 1.0
    assert a_los + a_nlos == pytest.approx(1.0, abs=1e-9)
    # each mass equals the integral of its unnormalized density
    mass, _ = integrate.quad(
        lambda x: serving_bs_density(x, LinkKind.LOS, cfg), 0.0, 3000.0, limit=400
    )
    assert mass == pytest.approx(a_los, rel=1e-6)


def test_serving_bs_mixture_normalizes(cfg):
    mass, _ = integrate.quad(
        lambda x: serving_bs_mixture_density(x, cfg), 0.0, 4000.0, limit=400
    )
    assert mass == pytest.approx(1.0, rel=1e-6)


def test_bs_association_limits(cfg):
    # removing blockage pushes every serving link to LOS
    assert assoc_prob_bs(LinkKind.LOS, cfg.replace(beta=1e-6)) > 0.999
    # strong blockage leaves mostly NLOS service
    assert assoc_prob_bs(LinkKind.NLOS, cfg.replace(beta=0.2)) > 0.9


def test_side_condition_hand_cases():
    # wall behind the reflector relative to both endpoints: always same side
    assert side_condition(120.0, 80.0, math.pi) == pytest.approx(1.0, abs=1e-12)
    # right angle with equal legs
    assert side_condition(50.0, 50.0, math.pi / 2) == pytest.approx(0.75, abs=1e-12)
    # degenerate coincident geometry falls back to the symmetric tie
    assert side_condition(50.0, 50.0, 0.0) == pytest.approx(0.5)


def test_side_condition_against_brute_force():
    rng = np.random.default_rng(11)
    walls = rng.uniform(0.0, 2.0 * math.pi, size=200_000)
    normals = np.stack([np.cos(walls), np.sin(walls)], axis=1)
    for _ in range(5):
        x = rng.uniform(5.0, 400.0)
        y = rng.uniform(5.0, 400.0)
        ups = rng.uniform(0.05, 2.0 * math.pi - 0.05)
        user = np.array([0.0, 0.0])
        ris = np.array([y, 0.0])
        bs = x * np.array([math.cos(ups), math.sin(ups)])
        side_user = (user - ris) @ normals.T
        side_bs = (bs - ris) @ normals.T
        frac = np.mean(side_user * side_bs > 0.0)
        assert side_condition(x, y, ups) == pytest.approx(frac, abs=0.01)


def test_bs_ris_distance_law_of_cosines():
    assert bs_ris_distance(3.0, 4.0, math.pi / 2) == pytest.approx(5.0)
    assert bs_ris_distance(10.0, 10.0, 0.0) == pytest.approx(0.0)
    assert bs_ris_distance(10.0, 10.0, 0.0, r_min=1.0) == 1.0


def test_nearest_los_ris_pdf_mass(cfg):
    # conditional on (x, ups): total mass is the LOS-reflector hit probability
    x, ups = 150.0, 1.3
    mass, _ = integrate.quad(
        lambda y: nearest_los_ris_pdf(x, y, ups, cfg), 0.0, 3000.0, limit=400
    )
    assert 0.0 < mass < 1.0
    # doubling the density increases the hit probability
    dense = cfg.replace(lambda_ris=2.0 * cfg.lambda_ris)
    mass2, _ = integrate.quad(
        lambda y: nearest_los_ris_pdf(x, y, ups, dense), 0.0, 3000.0, limit=400
    )
    assert mass2 > mass


def test_ris_masses_partition(cfg):
    a_ul = assoc_prob_ris(LinkKind.LOS, cfg)
    a_un = assoc_prob_ris(LinkKind.NLOS, cfg)
    bucket = assoc_prob_no_ris(cfg)
    assert a_ul > 0.0 and a_un > 0.0 and bucket >= 0.0
    assert a_ul + a_un + bucket == pytest.approx(1.0, abs=1e-9)
    # the joint-expectation identity the masses are built from
    assert ris_joint_expectation(cfg) == pytest.approx(a_ul + a_un, rel=1e-9)


def test_reflected_path_state_split(cfg):
    a_gl = assoc_prob_via_ris(LinkKind.LOS, cfg)
    a_gn = assoc_prob_via_ris(LinkKind.NLOS, cfg)
    assert a_gl + a_gn == pytest.approx(1.0, abs=1e-12)
    # a fully LOS reflected path requires an LOS serving reflector
    assert a_gl <= assoc_prob_ris(LinkKind.LOS, cfg) + 1e-9
