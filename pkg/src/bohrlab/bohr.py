"""Points of the compact character group attached to a frequency module.

At a fixed module with d generators the group of characters is a d-torus:
a point is an angle vector, stored in *turns* (angle / 2*pi) so that
rational turns stay exact Fractions through the group operations.  The
dense embedding of the line sends x to the point with turns g_k*x/(2*pi),
and the constructive substitute for denseness is a budgeted grid search
solving the simultaneous approximation problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .ap import APFunction
from .errors import InputError
from .frequencies import Frequency, FrequencyModule, require_same_module, turn_of
from .scalars import Coeff, EC_ZERO, RealLike, c_add, c_mul, phase_from_turn

Turn = Fraction | float

_GOLDEN_FRAC = (math.sqrt(5.0) - 1.0) / 2.0


def _norm_turn(x: Turn) -> Turn:
    if isinstance(x, Fraction):
        return x % 1
    return float(x) % 1.0


def _turn_add(a: Turn, b: Turn) -> Turn:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return (a + b) % 1
    return (float(a) + float(b)) % 1.0


class BohrPoint:
    """A character of the module, as a turn vector (theta_k / 2*pi)."""

    __slots__ = ("module", "turns")

    def __init__(self, module: FrequencyModule, turns):
        turns = tuple(_norm_turn(x) for x in turns)
        if len(turns) != module.dim:
            raise InputError(f"expected {module.dim} angles, got {len(turns)}")
        self.module = module
        self.turns = turns

    @staticmethod
    def identity(module: FrequencyModule) -> "BohrPoint":
        return BohrPoint(module, (Fraction(0),) * module.dim)

    @staticmethod
    def from_angles(module: FrequencyModule, angles) -> "BohrPoint":
        """Angles in radians; rational multiples of pi stay exact."""
        return BohrPoint(module, tuple(_angle_to_turn(a) for a in angles))

    def __mul__(self, other: "BohrPoint") -> "BohrPoint":
        require_same_module(self.module, other.module)
        return BohrPoint(
            self.module, tuple(_turn_add(a, b) for a, b in zip(self.turns, other.turns))
        )

    def inverse(self) -> "BohrPoint":
        return BohrPoint(
            self.module,
            tuple(-t if isinstance(t, Fraction) else -float(t) for t in self.turns),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, BohrPoint):
            return NotImplemented
        if self.module != other.module:
            return False
        for a, b in zip(self.turns, other.turns):
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                if a != b:
                    return False
            elif float(a) != float(b):
                return False
        return True

    __hash__ = None

    def distance(self, other: "BohrPoint") -> float:
        """Max circular distance between turn vectors (in turns)."""
        require_same_module(self.module, other.module)
        worst = 0.0
        for a, b in zip(self.turns, other.turns):
            d = abs(float(a) - float(b)) % 1.0
            worst = max(worst, min(d, 1.0 - d))
        return worst

    # -- evaluation ------------------------------------------------------

    def char_turn(self, freq: Frequency) -> Turn:
        require_same_module(self.module, freq.module)
        acc: Turn = Fraction(0)
        for n, t in zip(freq.coords, self.turns):
            if n:
                acc = _turn_add(acc, t * n if isinstance(t, Fraction) else float(t) * n)
        return _norm_turn(acc)

    def char_value(self, freq: Frequency) -> Coeff:
        """The point evaluated on chi_lambda; exact on quarter turns."""
        return phase_from_turn(self.char_turn(freq))

    def eval_ap(self, f: APFunction) -> Coeff:
        """sum c_lambda psi(chi_lambda), the dual pairing with a trig polynomial."""
        require_same_module(self.module, f.module)
        acc: Coeff = EC_ZERO
        for freq, c in f.terms():
            acc = c_add(acc, c_mul(c, self.char_value(freq)))
        return acc

    @property
    def angles(self) -> np.ndarray:
        return np.array([2.0 * math.pi * float(t) for t in self.turns])

    def __repr__(self) -> str:
        return f"BohrPoint(turns={self.turns!r})"


def _angle_to_turn(a: RealLike) -> Turn:
    from .scalars import PiTimes

    if isinstance(a, PiTimes):
        return (a.factor / 2) % 1
    if isinstance(a, (int, Fraction)) and a == 0:
        return Fraction(0)
    return (float(a) / (2.0 * math.pi)) % 1.0


def iota(module: FrequencyModule, x: RealLike) -> BohrPoint:
    """The dense embedding of the line: evaluation-at-x as a character.

    Turn k is g_k*x/(2*pi); it is exact whenever g_k*x is a rational
    multiple of pi (e.g. rational generators with shifts that are rational
    multiples of pi).
    """
    return BohrPoint(module, tuple(turn_of(module.unit(k), x) for k in range(module.dim)))


# ------------------------------------------------------------------
# constructive denseness: simultaneous approximation search
# ------------------------------------------------------------------


@dataclass(frozen=True)
class KroneckerResult:
    """Outcome of the approximation search.  ``found=False`` means the scan
    budget was exhausted, not that no approximant exists."""

    found: bool
    t: float | None
    gap: float
    points_scanned: int
    eps: float
    t_max: float

    def __bool__(self) -> bool:
        return self.found


def kronecker_residual(psi: BohrPoint, t: float) -> float:
    """max_k |e^{i g_k t} - e^{i theta_k}| for a candidate preimage t."""
    gens = psi.module.float_values
    worst = 0.0
    for g, turn in zip(gens, psi.turns):
        theta = 2.0 * math.pi * float(turn)
        worst = max(worst, 2.0 * abs(math.sin(0.5 * (g * t - theta))))
    return worst


def kronecker_approx(
    psi: BohrPoint,
    eps: float,
    t_max: float,
    step: float | None = None,
    refine: bool = True,
) -> KroneckerResult:
    """Search [-t_max, t_max] for t with max_k |e^{i g_k t} - e^{i theta_k}| < eps.

    Grid scan with a golden-ratio jitter on the origin (step defaults to
    eps / (2 max|g_k|), small enough that a grid point falls inside any
    successful window), then a local refinement pass around the first hit.
    """
    if eps <= 0:
        raise InputError("eps must be positive")
    if t_max <= 0:
        raise InputError("t_max must be positive")
    gens = psi.module.float_values
    targets = np.array([2.0 * math.pi * float(t) for t in psi.turns])

    # d=1 has a closed-form preimage
    if psi.module.dim == 1:
        g = float(gens[0])
        t = float(targets[0]) / g
        for cand in (t, t - 2.0 * math.pi / g, t + 2.0 * math.pi / g):
            if abs(cand) <= t_max:
                gap = kronecker_residual(psi, cand)
                if gap < eps:
                    return KroneckerResult(True, cand, gap, 1, eps, t_max)

    gmax = float(np.max(np.abs(gens)))
    if step is None:
        step = eps / (2.0 * gmax)
    # scan the positive half first (outward from 0), then the negative half
    half = int(math.floor(t_max / step))
    jitter = _GOLDEN_FRAC * step
    idx, gap = kernels.chord_gap_scan(gens, targets, eps, jitter, step, half)
    scanned = half if idx < 0 else idx + 1
    t0 = jitter
    if idx < 0:
        idx, gap_neg = kernels.chord_gap_scan(
            gens, targets, eps, jitter - t_max, step, half
        )
        t0 = jitter - t_max
        if idx < 0:
            return KroneckerResult(False, None, min(gap, gap_neg), 2 * half, eps, t_max)
        scanned += idx + 1
        gap = gap_neg
    t_hit = t0 + idx * step
    if refine:
        ts = t_hit + np.linspace(-step, step, 401)
        ts = ts[np.abs(ts) <= t_max]
        args = 0.5 * (np.outer(gens, ts) - targets[:, None])
        gaps = (2.0 * np.abs(np.sin(args))).max(axis=0)
        j = int(np.argmin(gaps))
        scanned += ts.size
        if gaps[j] < gap:
            t_hit = float(ts[j])
    return KroneckerResult(True, t_hit, kronecker_residual(psi, t_hit), scanned, eps, t_max)
