"""Complex Henon factors and their compositions.

A factor is the polynomial automorphism H(x, y) = (y, p(y) - a*x) of C^2
with deg p >= 2 and a != 0.  A map is an ordered composition of factors;
its degree is the product of the factor degrees.  All norms are the
supremum norm max(|x|, |y|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

__all__ = [
    "ComplexPoint",
    "HenonFactor",
    "HenonMap",
    "LogOrbitState",
    "OverflowSignal",
    "FORWARD",
    "INVERSE",
    "SWITCH_MAGNITUDE",
    "eval_factor",
    "eval_factor_inverse",
    "eval_map",
    "degree",
    "log_step",
    "sup_norm",
]

FORWARD = 1
INVERSE = -1

# Exact arithmetic is abandoned once the dominant coordinate reaches this
# magnitude; beyond it p(y) is numerically indistinguishable from its
# leading term anyway.
SWITCH_MAGNITUDE = 1e8

# Magnitude at which intermediate products would threaten double range for
# degrees up to ~20.
_EXACT_LIMIT = 1e300

MAX_FACTOR_DEGREE = 20


class OverflowSignal(ArithmeticError):
    """Exact evaluation left the representable range; use the log-space path."""


class ComplexPoint(NamedTuple):
    x: complex
    y: complex

    def is_finite(self) -> bool:
        return (
            math.isfinite(self.x.real)
            and math.isfinite(self.x.imag)
            and math.isfinite(self.y.real)
            and math.isfinite(self.y.imag)
        )


def sup_norm(z: ComplexPoint) -> float:
    return max(abs(z[0]), abs(z[1]))


@dataclass(frozen=True)
class HenonFactor:
    """One map (x, y) -> (y, p(y) - a*x) with p given by coeffs c_0..c_d."""

    coeffs: tuple[complex, ...]
    a: complex

    def __post_init__(self) -> None:
        coeffs = tuple(complex(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "a", complex(self.a))
        if len(coeffs) < 3:
            raise ValueError("polynomial degree must be at least 2")
        if len(coeffs) - 1 > MAX_FACTOR_DEGREE:
            raise ValueError(f"polynomial degree above {MAX_FACTOR_DEGREE} unsupported")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if self.a == 0:
            raise ValueError("a must be nonzero (invertibility)")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def poly(self, w: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * w + c
        return acc


@dataclass(frozen=True)
class HenonMap:
    """Composition of factors, stored leftmost-outermost.

    ``factors[0]`` is the last factor applied in the forward direction,
    mirroring the convention used for words over a generator set.
    """

    factors: tuple[HenonFactor, ...]

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        object.__setattr__(self, "factors", factors)
        if not factors:
            raise ValueError("a Henon map needs at least one factor")

    @property
    def degree(self) -> int:
        d = 1
        for f in self.factors:
            d *= f.degree
        return d

    def __mul__(self, other: "HenonMap") -> "HenonMap":
        """Composition self o other (other applied first)."""
        return HenonMap(self.factors + other.factors)


def henon_map(coeffs: Sequence[complex], a: complex) -> HenonMap:
    """Convenience constructor for a single-factor map."""
    return HenonMap((HenonFactor(tuple(coeffs), a),))


def eval_factor(f: HenonFactor, z: ComplexPoint) -> ComplexPoint:
    """(x, y) -> (y, p(y) - a*x), Horner evaluation of p."""
    x, y = z
    if max(abs(x), abs(y)) > _EXACT_LIMIT ** (1.0 / f.degree):
        raise OverflowSignal("magnitude too large for exact evaluation")
    out = ComplexPoint(y, f.poly(y) - f.a * x)
    if not out.is_finite():
        raise OverflowSignal("overflow in exact factor evaluation")
    return out


def eval_factor_inverse(f: HenonFactor, z: ComplexPoint) -> ComplexPoint:
    """(x, y) -> ((p(x) - y)/a, x); exact inverse of eval_factor."""
    x, y = z
    if max(abs(x), abs(y)) > _EXACT_LIMIT ** (1.0 / f.degree):
        raise OverflowSignal("magnitude too large for exact evaluation")
    out = ComplexPoint((f.poly(x) - y) / f.a, x)
    if not out.is_finite():
        raise OverflowSignal("overflow in exact factor evaluation")
    return out


def eval_map(H: HenonMap, z: ComplexPoint, direction: int = FORWARD) -> ComplexPoint:
    """Apply H (or its inverse) to z.

    Forward applies factors innermost-first, i.e. reversed storage order;
    the inverse applies factor inverses in storage order, so the round
    trip is the identity up to rounding.
    """
    if direction == FORWARD:
        for f in reversed(H.factors):
            z = eval_factor(f, z)
    elif direction == INVERSE:
        for f in H.factors:
            z = eval_factor_inverse(f, z)
    else:
        raise ValueError("direction must be FORWARD (1) or INVERSE (-1)")
    return z


def degree(H: HenonMap) -> int:
    return H.degree


@dataclass(frozen=True)
class LogOrbitState:
    """Orbit state that survives overflow.

    Either an exact point, or a certified band for log|y| of the true
    orbit: log|y| lies in [log_y - err, log_y + err].
    """

    point: Optional[ComplexPoint] = None
    log_y: float = 0.0
    err: float = 0.0

    def __post_init__(self) -> None:
        if self.point is None and self.err < 0:
            raise ValueError("err must be nonnegative")

    @property
    def is_exact(self) -> bool:
        return self.point is not None

    @classmethod
    def exact(cls, z: ComplexPoint) -> "LogOrbitState":
        return cls(point=z)

    @classmethod
    def asymptotic(cls, log_y: float, err: float) -> "LogOrbitState":
        return cls(point=None, log_y=float(log_y), err=float(err))


def log_step(
    f: HenonFactor,
    s: LogOrbitState,
    m_bound: float,
    M_bound: float,
    switch_magnitude: float = SWITCH_MAGNITUDE,
) -> LogOrbitState:
    """Advance an orbit state by one factor, overflow-safely.

    Exact states are mapped exactly; a state entering with |y| past the
    switch threshold (and |y| >= |x|, so the two-sided growth bounds
    apply) is converted to asymptotic form first.  Asymptotic states use
    log_y' = d*log_y + (log m + log M)/2,  err' = d*err + (log M - log m)/2,
    which preserves the certified band whenever m*|y|^d <= |p(y) - a*x|
    <= M*|y|^d holds on the state's region.
    """
    if not (0.0 < m_bound <= M_bound):
        raise ValueError("need 0 < m_bound <= M_bound")
    d = f.degree
    if s.is_exact:
        z = s.point
        ay = abs(z.y)
        if ay >= switch_magnitude and ay >= abs(z.x):
            s = LogOrbitState.asymptotic(math.log(ay), 0.0)
        else:
            return LogOrbitState.exact(eval_factor(f, z))
    mid = 0.5 * (math.log(m_bound) + math.log(M_bound))
    rad = 0.5 * (math.log(M_bound) - math.log(m_bound))
    return LogOrbitState.asymptotic(d * s.log_y + mid, d * s.err + rad)
