"""Exact scalars in the ring Z[omega, 1/2] with omega = e^{i pi/4}.

A value is stored as four integer coefficients (a, b, c, d) meaning
a + b*omega + c*omega^2 + d*omega^3, times a global factor 2^(pow2/2) with
integer pow2 (so half-integer powers of two are exact: sqrt(2) = omega - omega^3
has pow2 parity folded into the coefficients).

Python integers are arbitrary precision, so coefficient arithmetic never wraps;
"overflow" in the sense of fixed-width machine words cannot occur.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction

OMEGA = cmath.exp(1j * math.pi / 4)

# Phases are rational multiples of pi, reduced mod 2 and kept in lowest terms
# by fractions.Fraction. Helpers below encode the grid checks used everywhere.


def normalize_phase(p: Fraction) -> Fraction:
    return Fraction(p) % 2


def phase_is_pauli(p: Fraction) -> bool:
    return p.denominator == 1


def phase_is_clifford(p: Fraction) -> bool:
    return p.denominator in (1, 2)


def phase_is_t_like(p: Fraction) -> bool:
    """True for odd multiples of pi/4."""
    return p.denominator == 4


def phase_to_qpi4(p: Fraction) -> int | None:
    """Phase as an integer multiple of pi/4 in [0, 8), or None if off-grid."""
    q = normalize_phase(p) * 4
    if q.denominator != 1:
        return None
    return int(q) % 8


class ScalarExact:
    """An element of Z[omega, 1/2], canonicalized.

    Canonical form: the zero scalar has all coefficients 0 and pow2 = 0; any
    other value has its coefficient vector not divisible by sqrt(2) = omega -
    omega^3 (the remaining sqrt(2) content lives in pow2). This makes equality,
    hashing and serialization bit-exact.
    """

    __slots__ = ("a", "b", "c", "d", "pow2")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0, pow2: int = 0):
        self.a = a
        self.b = b
        self.c = c
        self.d = d
        self.pow2 = pow2
        self._canonicalize()

    # -- construction -------------------------------------------------

    @classmethod
    def zero(cls) -> "ScalarExact":
        return cls(0, 0, 0, 0, 0)

    @classmethod
    def one(cls) -> "ScalarExact":
        return cls(1, 0, 0, 0, 0)

    @classmethod
    def from_int(cls, n: int) -> "ScalarExact":
        return cls(n, 0, 0, 0, 0)

    @classmethod
    def sqrt2_power(cls, k: int) -> "ScalarExact":
        """2^(k/2)."""
        return cls(1, 0, 0, 0, k)

    @classmethod
    def omega_power(cls, k: int) -> "ScalarExact":
        """omega^k = e^{i k pi / 4}."""
        k %= 8
        sign = 1 if k < 4 else -1
        coeffs = [0, 0, 0, 0]
        coeffs[k % 4] = sign
        return cls(*coeffs, 0)

    @classmethod
    def from_phase(cls, p: Fraction) -> "ScalarExact":
        """e^{i pi p} for p on the pi/4 grid; raises ValueError otherwise."""
        k = phase_to_qpi4(p)
        if k is None:
            raise ValueError(f"phase {p} is not a multiple of pi/4")
        return cls.omega_power(k)

    # -- canonical form ------------------------------------------------

    def _canonicalize(self) -> None:
        if self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0:
            self.pow2 = 0
            return
        # divide out sqrt(2) = omega - omega^3 while the quotient is integral:
        # sqrt2 * (a,b,c,d) = (b-d, a+c, b+d, c-a)
        while True:
            A, B, C, D = self.a, self.b, self.c, self.d
            if (A - C) % 2 or (B - D) % 2:
                break
            self.a = (B - D) // 2
            self.b = (A + C) // 2
            self.c = (B + D) // 2
            self.d = (C - A) // 2
            self.pow2 += 1

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0 and self.c == 0 and self.d == 0

    # -- ring operations -----------------------------------------------

    def __mul__(self, other: "ScalarExact") -> "ScalarExact":
        if not isinstance(other, ScalarExact):
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        # omega^4 = -1
        a = a1 * a2 - b1 * d2 - c1 * c2 - d1 * b2
        b = a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2
        c = a1 * c2 + b1 * b2 + c1 * a2 - d1 * d2
        d = a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2
        return ScalarExact(a, b, c, d, self.pow2 + other.pow2)

    def __add__(self, other: "ScalarExact") -> "ScalarExact":
        if not isinstance(other, ScalarExact):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        k = min(self.pow2, other.pow2)
        x = self._with_pow2(k)
        y = other._with_pow2(k)
        return ScalarExact(x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3], k)

    def _with_pow2(self, k: int) -> tuple[int, int, int, int]:
        """Coefficients re-expressed at the (lower) exponent k."""
        a, b, c, d = self.a, self.b, self.c, self.d
        for _ in range(self.pow2 - k):
            a, b, c, d = b - d, a + c, b + d, c - a
        return a, b, c, d

    def __neg__(self) -> "ScalarExact":
        return ScalarExact(-self.a, -self.b, -self.c, -self.d, self.pow2)

    def __sub__(self, other: "ScalarExact") -> "ScalarExact":
        return self + (-other)

    def conjugate(self) -> "ScalarExact":
        return ScalarExact(self.a, -self.d, -self.c, -self.b, self.pow2)

    @property
    def is_real(self) -> bool:
        return self.b == self.d == 0 or self == self.conjugate()

    # -- comparisons / io ------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ScalarExact):
            return NotImplemented
        return (self.a, self.b, self.c, self.d, self.pow2) == (
            other.a,
            other.b,
            other.c,
            other.d,
            other.pow2,
        )

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.c, self.d, self.pow2))

    def to_complex(self) -> complex:
        val = self.a + self.b * OMEGA + self.c * OMEGA**2 + self.d * OMEGA**3
        return val * math.sqrt(2.0) ** self.pow2

    def to_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.a, self.b, self.c, self.d, self.pow2)

    @classmethod
    def from_tuple(cls, t) -> "ScalarExact":
        a, b, c, d, pow2 = t
        return cls(int(a), int(b), int(c), int(d), int(pow2))

    def ring_repr(self) -> str:
        """Symbolic form, e.g. '(1 - 2ω + ω³)·2^(-3/2)'."""
        if self.is_zero:
            return "0"
        body = ""
        nterms = 0
        for coef, sym in zip((self.a, self.b, self.c, self.d), ("", "ω", "ω²", "ω³")):
            if coef == 0:
                continue
            mag = abs(coef)
            term = (sym or "1") if mag == 1 else f"{mag}{sym}"
            if not body:
                body = ("-" if coef < 0 else "") + term
            else:
                body += (" - " if coef < 0 else " + ") + term
            nterms += 1
        if self.pow2 == 0:
            return body
        expo = f"2^({self.pow2}/2)" if self.pow2 % 2 else f"2^{self.pow2 // 2}"
        return (f"({body})" if nterms > 1 else body) + "·" + expo

    def __repr__(self) -> str:
        return f"ScalarExact({self.a}, {self.b}, {self.c}, {self.d}, pow2={self.pow2})"

    def __str__(self) -> str:
        return self.ring_repr()
