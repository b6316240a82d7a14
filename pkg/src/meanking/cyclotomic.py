"""Exact arithmetic over integer combinations of roots of unity.

For an odd prime p, elements are stored as length-p integer coefficient
vectors over the powers of q = exp(2*pi*i/p).  The single relation
1 + q + ... + q^(p-1) = 0 means two vectors describe the same element exactly
when they differ by a constant shift, so the canonical form subtracts the
last coefficient from all entries and equality becomes a plain tuple
comparison.

p = 2 is special: q = -1 generates only the plain integers, but the third
complementary basis of a two-level system lives in the Gaussian integers.
There the coefficient pair (a, b) means a + b*i, there is no shift relation,
and powers of q degenerate to signs.

Amplitudes carry an extra global factor p^(-t/2) as an integer exponent t,
kept outside the ring (sqrt(p) is not an element); squared magnitudes, the
only physically compared quantities, come back rational.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Sequence


def _canonical(p: int, coeffs: Sequence[int]) -> tuple[int, ...]:
    if p == 2:
        return tuple(int(c) for c in coeffs)
    shift = coeffs[-1]
    if shift == 0:
        return tuple(int(c) for c in coeffs)
    return tuple(int(c) - shift for c in coeffs)


class CyclotomicInt:
    """An exact integer combination of p-th roots of unity (Gaussian integer for p=2)."""

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if p < 2:
            raise ValueError(f"modulus must be at least 2, got {p}")
        if len(coeffs) != p:
            raise ValueError(f"need {p} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", _canonical(p, coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicInt is immutable")

    @classmethod
    def zero(cls, p: int) -> "CyclotomicInt":
        return cls(p, [0] * p)

    @classmethod
    def one(cls, p: int) -> "CyclotomicInt":
        return cls.root_power(p, 0)

    @classmethod
    def root_power(cls, p: int, e: int) -> "CyclotomicInt":
        """q^e for q = exp(2*pi*i/p); for p=2 this is the sign (-1)^e."""
        if p == 2:
            return cls(2, [1 if e % 2 == 0 else -1, 0])
        coeffs = [0] * p
        coeffs[e % p] = 1
        return cls(p, coeffs)

    @classmethod
    def imaginary_unit(cls) -> "CyclotomicInt":
        """The Gaussian unit i; only meaningful in the p=2 ring."""
        return cls(2, [0, 1])

    @classmethod
    def integer(cls, p: int, n: int) -> "CyclotomicInt":
        coeffs = [0] * p
        coeffs[0] = n
        return cls(p, coeffs)

    def _check_same_ring(self, other: "CyclotomicInt") -> None:
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check_same_ring(other)
        return CyclotomicInt(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check_same_ring(other)
        return CyclotomicInt(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.p, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(self.p, [a * other for a in self.coeffs])
        self._check_same_ring(other)
        p = self.p
        if p == 2:
            a0, a1 = self.coeffs
            b0, b1 = other.coeffs
            return CyclotomicInt(2, [a0 * b0 - a1 * b1, a0 * b1 + a1 * b0])
        out = [0] * p
        for e1, c1 in enumerate(self.coeffs):
            if c1 == 0:
                continue
            for e2, c2 in enumerate(other.coeffs):
                if c2 == 0:
                    continue
                out[(e1 + e2) % p] += c1 * c2
        return CyclotomicInt(p, out)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicInt":
        """Complex conjugation: index permutation e -> p-e for odd p, i -> -i for p=2."""
        p = self.p
        if p == 2:
            return CyclotomicInt(2, [self.coeffs[0], -self.coeffs[1]])
        return CyclotomicInt(p, [self.coeffs[(p - e) % p] for e in range(p)])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def divisible_by_modulus(self) -> bool:
        return all(c % self.p == 0 for c in self.coeffs)

    def divide_by_modulus(self) -> "CyclotomicInt":
        if not self.divisible_by_modulus():
            raise ValueError("element is not divisible by the modulus")
        return CyclotomicInt(self.p, [c // self.p for c in self.coeffs])

    def as_int(self) -> int:
        """The value as a plain integer; raises if the element is not rational."""
        if self.p == 2:
            if self.coeffs[1] != 0:
                raise ValueError("element has an imaginary part")
            return self.coeffs[0]
        if any(c != 0 for c in self.coeffs[1:]):
            raise ValueError("element is not a rational integer")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        p = self.p
        if p == 2:
            return complex(self.coeffs[0], self.coeffs[1])
        total = 0j
        for e, c in enumerate(self.coeffs):
            if c != 0:
                total += c * cmath.exp(2j * cmath.pi * e / p)
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs))

    def __repr__(self) -> str:
        return f"CyclotomicInt(p={self.p}, coeffs={list(self.coeffs)})"


class Amplitude:
    """A CyclotomicInt together with a global scale factor p^(-scale_pow/2).

    The canonical form strips factors of p out of the value into the scale
    (value*p at scale t+2 equals value at scale t), so rescaled copies of the
    same amplitude compare equal.
    """

    __slots__ = ("value", "scale_pow")

    def __init__(self, value: CyclotomicInt, scale_pow: int = 0):
        if scale_pow < 0:
            raise ValueError("scale_pow must be non-negative")
        if value.is_zero():
            value, scale_pow = CyclotomicInt.zero(value.p), 0
        else:
            while scale_pow >= 2 and value.divisible_by_modulus():
                value = value.divide_by_modulus()
                scale_pow -= 2
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "scale_pow", scale_pow)

    def __setattr__(self, name, value):
        raise AttributeError("Amplitude is immutable")

    @property
    def p(self) -> int:
        return self.value.p

    @classmethod
    def zero(cls, p: int) -> "Amplitude":
        return cls(CyclotomicInt.zero(p))

    @classmethod
    def one(cls, p: int) -> "Amplitude":
        return cls(CyclotomicInt.one(p))

    def __mul__(self, other):
        if isinstance(other, CyclotomicInt):
            other = Amplitude(other)
        return Amplitude(self.value * other.value, self.scale_pow + other.scale_pow)

    def __add__(self, other: "Amplitude") -> "Amplitude":
        if self.value.is_zero():
            return other
        if other.value.is_zero():
            return self
        t1, t2 = self.scale_pow, other.scale_pow
        if (t2 - t1) % 2 != 0:
            raise ValueError("cannot add amplitudes of incompatible scale parity")
        t = max(t1, t2)
        v1 = self.value * self.p ** ((t - t1) // 2)
        v2 = other.value * self.p ** ((t - t2) // 2)
        return Amplitude(v1 + v2, t)

    def __sub__(self, other: "Amplitude") -> "Amplitude":
        return self + (-other)

    def __neg__(self) -> "Amplitude":
        return Amplitude(-self.value, self.scale_pow)

    def conjugate(self) -> "Amplitude":
        return Amplitude(self.value.conjugate(), self.scale_pow)

    def squared_modulus(self) -> "Amplitude":
        return self * self.conjugate()

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def as_fraction(self) -> Fraction:
        """The value as an exact rational; raises if it is not one."""
        n = self.value.as_int()
        if n == 0:
            return Fraction(0)
        if self.scale_pow % 2 != 0:
            raise ValueError("amplitude carries an odd power of 1/sqrt(p)")
        return Fraction(n, self.p ** (self.scale_pow // 2))

    def to_complex(self) -> complex:
        return self.value.to_complex() * self.p ** (-self.scale_pow / 2)

    def to_json(self) -> dict:
        return {"scale_pow": self.scale_pow, "coeffs": list(self.value.coeffs)}

    @classmethod
    def from_json(cls, p: int, obj: dict) -> "Amplitude":
        return cls(CyclotomicInt(p, obj["coeffs"]), obj["scale_pow"])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Amplitude):
            return NotImplemented
        return self.value == other.value and self.scale_pow == other.scale_pow

    def __hash__(self) -> int:
        return hash((self.value, self.scale_pow))

    def __repr__(self) -> str:
        return f"Amplitude({self.value!r}, scale_pow={self.scale_pow})"


def exact_overlap(bra: Sequence[Amplitude], ket: Sequence[Amplitude]) -> Amplitude:
    """Inner product <bra|ket> = sum_j conj(bra_j) * ket_j of amplitude vectors."""
    if len(bra) != len(ket):
        raise ValueError("vector length mismatch")
    total = Amplitude.zero(bra[0].p)
    for a, b in zip(bra, ket):
        if a.is_zero() or b.is_zero():
            continue
        total = total + a.conjugate() * b
    return total
