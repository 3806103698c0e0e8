import math
from fractions import Fraction

import numpy as np
import pytest

from bohrlab import (
    APFunction,
    BohrPoint,
    ExactComplex,
    FrequencyModule,
    InputError,
    PiTimes,
    iota,
    kronecker_approx,
    kronecker_residual,
)
from util import brute_kronecker, random_exact_ap, random_point

M1 = FrequencyModule.integers()
M2 = FrequencyModule.make(1, "sqrt2")


def test_identity_is_neutral(rng):
    e = BohrPoint.identity(M2)
    psi = random_point(M2, rng)
    assert e * psi == psi


def test_inverse_cancels(rng):
    psi = BohrPoint(M2, (Fraction(3, 7), Fraction(1, 3)))
    assert psi * psi.inverse() == BohrPoint.identity(M2)


def test_angle_addition_mod_two_pi():
    # 3pi/2 + 3pi/2 = pi on the circle
    psi = BohrPoint.from_angles(M1, [PiTimes(Fraction(3, 2))])
    prod = psi * psi
    assert prod.turns == (Fraction(1, 2),)


def test_group_laws_random(rng):
    for _ in range(30):
        a, b, c = (random_point(M2, rng) for _ in range(3))
        assert ((a * b) * c).distance(a * (b * c)) < 1e-12
        assert (a * b).distance(b * a) < 1e-12


def test_character_property(rng):
    psi = random_point(M2, rng)
    for _ in range(20):
        lam = M2.frequency(*rng.integers(-5, 6, 2))
        mu = M2.frequency(*rng.integers(-5, 6, 2))
        lhs = complex(psi.char_value(lam + mu))
        rhs = complex(psi.char_value(lam)) * complex(psi.char_value(mu))
        assert abs(lhs - rhs) < 1e-12
        assert abs(abs(complex(psi.char_value(lam))) - 1.0) < 1e-12


def test_iota_at_zero_is_identity():
    assert iota(M2, 0) == BohrPoint.identity(M2)


def test_iota_is_homomorphism_exact_turns():
    x, y = PiTimes(Fraction(1, 3)), PiTimes(Fraction(5, 6))
    lhs = iota(M1, x) * iota(M1, y)
    rhs = iota(M1, PiTimes(Fraction(1, 3) + Fraction(5, 6)))
    assert lhs.turns == rhs.turns  # exact Fractions on both sides


def test_iota_is_homomorphism_float(rng):
    for _ in range(25):
        x, y = rng.uniform(-50, 50, 2)
        lhs = iota(M2, float(x)) * iota(M2, float(y))
        rhs = iota(M2, float(x) + float(y))
        assert lhs.distance(rhs) < 1e-12


def test_iota_pi_half_turn_and_char():
    psi = iota(M1, PiTimes(Fraction(1, 2)))
    assert psi.turns == (Fraction(1, 4),)
    assert psi.char_value(M1.frequency(1)) == ExactComplex(Fraction(0), Fraction(1))


def test_point_eval_constant():
    psi = BohrPoint(M1, (0.37,))
    f = APFunction.constant(M1, 1)
    assert complex(psi.eval_ap(f)) == 1


def test_point_eval_agrees_with_function_eval(rng):
    # iota(x) evaluates a trig polynomial to f(x)
    for _ in range(20):
        f = random_exact_ap(M2, rng)
        x = float(rng.uniform(-10, 10))
        assert abs(complex(iota(M2, x).eval_ap(f)) - f.eval(x)) < 1e-10


def test_translated_point_eval_picks_up_phase(rng):
    # (iota(t) + psi)(chi_lambda) = e^{i lambda t} psi(chi_lambda)
    psi = random_point(M2, rng)
    t = float(rng.uniform(-5, 5))
    lam = M2.frequency(2, -1)
    lhs = complex((iota(M2, t) * psi).char_value(lam))
    rhs = np.exp(1j * lam.value * t) * complex(psi.char_value(lam))
    assert abs(lhs - rhs) < 1e-12


def test_eval_module_mismatch():
    psi = BohrPoint.identity(M1)
    with pytest.raises(InputError):
        psi.eval_ap(APFunction.character(M2, 1, 0))


# ------------------------------------------------------------------
# kronecker approximation
# ------------------------------------------------------------------


def test_kronecker_requires_positive_eps():
    with pytest.raises(InputError):
        kronecker_approx(BohrPoint.identity(M1), 0.0, 10.0)


def test_kronecker_d1_exact_preimage():
    theta = 2.5
    psi = BohrPoint.from_angles(M1, [theta])
    res = kronecker_approx(psi, 0.05, 1e4)
    assert res.found
    assert abs(res.t - theta) < 1e-9
    assert kronecker_residual(psi, res.t) < 1e-9


def test_kronecker_d2_target_with_grid_oracle():
    psi = BohrPoint.from_angles(M2, [0, PiTimes(Fraction(1))])
    eps = 0.05
    res = kronecker_approx(psi, eps, 1e6)
    assert res.found
    assert kronecker_residual(psi, res.t) < eps
    # independent brute-force oracle at the guaranteed step
    gens = [1.0, math.sqrt(2.0)]
    step = eps / (2.0 * math.sqrt(2.0))
    t_oracle = brute_kronecker(gens, [0.0, math.pi], eps, 0.0, 5000.0, step)
    assert t_oracle is not None
    assert max(
        2.0 * abs(math.sin(0.5 * (g * t_oracle - th)))
        for g, th in zip(gens, [0.0, math.pi])
    ) < eps


def test_kronecker_accepts_exact_preimage_point():
    psi = iota(M1, 5.0)
    assert kronecker_residual(psi, 5.0) < 1e-12
    res = kronecker_approx(psi, 1e-6, 1e4)
    assert res.found
    assert kronecker_residual(psi, res.t) < 1e-6


def test_kronecker_budget_exhaustion_is_reported():
    # an unreachable gap: eps far below the grid guarantee on a tiny budget
    psi = BohrPoint.from_angles(M2, [1.0, 2.0])
    res = kronecker_approx(psi, 1e-9, 0.5, step=0.3)
    if not res.found:
        assert res.t is None
        assert res.points_scanned > 0
        assert res.gap >= 1e-9


def test_kronecker_statistical_d2(rng):
    hits = 0
    for _ in range(20):
        psi = BohrPoint(M2, tuple(float(u) for u in rng.random(2)))
        res = kronecker_approx(psi, 0.1, 1e6)
        if res.found:
            assert kronecker_residual(psi, res.t) < 0.1
            hits += 1
    assert hits >= 19


def test_kronecker_statistical_d3(rng):
    m3 = FrequencyModule.make(1, "sqrt2", "sqrt3")
    hits = 0
    for _ in range(10):
        psi = BohrPoint(m3, tuple(float(u) for u in rng.random(3)))
        res = kronecker_approx(psi, 0.1, 1e6)
        if res.found:
            assert kronecker_residual(psi, res.t) < 0.1
            hits += 1
    assert hits >= 9
