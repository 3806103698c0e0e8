from fractions import Fraction

import mpmath as mp
import pytest

from bohrlab import FrequencyModule, Generator, InputError
from bohrlab.frequencies import chord_of, in_two_pi_z, turn_of
from bohrlab.scalars import PiTimes


def test_coordinatewise_addition():
    m = FrequencyModule.make(1, "sqrt2")
    a = m.frequency(1, 0)
    b = m.frequency(0, 2)
    assert (a + b).coords == (1, 2)


def test_inverse_pair_sums_to_zero():
    m = FrequencyModule.integers()
    a = m.frequency(3)
    assert (a + (-a)).is_zero()


def test_value_is_additive_over_irrational_generators():
    m = FrequencyModule.make(1, "sqrt2")
    f = m.frequency(1, 1)
    # oracle: 50-digit evaluation of 1 + sqrt(2)
    expected = float(mp.mpf(1) + mp.sqrt(2))
    assert abs(f.value - expected) < 1e-12
    assert abs(f.value - (m.frequency(1, 0).value + m.frequency(0, 1).value)) < 1e-12


def test_zero_vector_value():
    m = FrequencyModule.make(1, "sqrt2")
    assert m.zero().value == 0.0


def test_pi_generator_value():
    m = FrequencyModule.make("pi")
    # oracle: 2*pi from the multiprecision constant
    assert abs(m.frequency(2).value - float(2 * mp.pi)) < 1e-12


def test_dependent_rational_generators_rejected():
    with pytest.raises(InputError, match="dependent"):
        FrequencyModule.make(1, Fraction(1, 2))


def test_dependent_pi_multiples_rejected():
    with pytest.raises(InputError, match="dependent"):
        FrequencyModule.make("pi", ("pi", Fraction(1, 3)))


def test_zero_generator_rejected():
    with pytest.raises(InputError):
        FrequencyModule.make(0)


def test_rational_canonicalization_gcd():
    m = FrequencyModule.from_rationals([1, Fraction(1, 2)])
    assert m.dim == 1
    assert m.generators[0].symbolic.terms["1"] == Fraction(1, 2)
    m2 = FrequencyModule.from_rationals([Fraction(1, 2), Fraction(1, 3)])
    assert m2.generators[0].symbolic.terms["1"] == Fraction(1, 6)


def test_module_mismatch_is_input_error():
    a = FrequencyModule.integers().frequency(1)
    b = FrequencyModule.make(2).frequency(1)
    with pytest.raises(InputError):
        a + b


def test_group_laws_on_random_triples(rng):
    m = FrequencyModule.make(1, "sqrt2", "sqrt3")
    for _ in range(50):
        a = m.frequency(*rng.integers(-9, 10, 3))
        b = m.frequency(*rng.integers(-9, 10, 3))
        c = m.frequency(*rng.integers(-9, 10, 3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a + m.zero() == a
        assert (a + (-a)).is_zero()


def test_value_homomorphism_on_random_pairs(rng):
    m = FrequencyModule.make(1, "sqrt2")
    for _ in range(50):
        a = m.frequency(*rng.integers(-9, 10, 2))
        b = m.frequency(*rng.integers(-9, 10, 2))
        lhs = (a + b).value
        rhs = a.value + b.value
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


def test_turn_exact_for_pi_shift():
    m = FrequencyModule.integers()
    f = m.frequency(1)
    assert turn_of(f, PiTimes(Fraction(1))) == Fraction(1, 2)
    assert turn_of(f, PiTimes(Fraction(1, 2))) == Fraction(1, 4)
    assert turn_of(m.frequency(4), PiTimes(Fraction(1, 2))) == Fraction(0)


def test_in_two_pi_z_exact_decisions():
    m = FrequencyModule.integers()
    f = m.frequency(3)
    assert in_two_pi_z(f, PiTimes(Fraction(2)))  # 3 * 2pi
    assert not in_two_pi_z(f, PiTimes(Fraction(1)))  # 3pi
    assert not in_two_pi_z(f, 1)  # 3 is not a multiple of 2pi: exact
    assert in_two_pi_z(m.zero(), 1)


def test_in_two_pi_z_sqrt_generator():
    m = FrequencyModule.make("sqrt2")
    f = m.frequency(5)
    assert not in_two_pi_z(f, 1)
    assert not in_two_pi_z(f, PiTimes(Fraction(2, 5)))  # 2pi*sqrt2: opaque, numeric
    assert in_two_pi_z(m.zero(), PiTimes(Fraction(2)))


def test_chord_exact_zero_on_periodic_shift():
    m = FrequencyModule.integers()
    assert chord_of(m.frequency(7), PiTimes(Fraction(2))) == 0.0
    # oracle: |e^{i*pi} - 1| = 2
    assert chord_of(m.frequency(1), PiTimes(Fraction(1))) == pytest.approx(2.0, abs=1e-15)


def test_generator_symbol_decimal_consistency():
    with pytest.raises(InputError, match="does not match"):
        Generator("pi", "2.71828", Fraction(1))


def test_relation_scan_finds_small_relations():
    # 7*(3/7) - 3*1 = 0
    with pytest.raises(InputError, match="dependent"):
        FrequencyModule.make(1, Fraction(3, 7))


def test_big_module_budget_guard():
    with pytest.raises(InputError, match="budget"):
        FrequencyModule.make(*[("pi", Fraction(1, k)) for k in range(1, 8)])


def test_precision_env_override():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "import mpmath, bohrlab; print(mpmath.mp.dps)"],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "BOHR_PRECISION": "30"},
    )
    assert out.stdout.strip() == "30"
