"""Rank-2 peripheral lattice arithmetic.

A slope on a boundary torus is a primitive vector ``x*alpha + y*beta`` of
``P = Z alpha + Z beta``.  An extended lattice ``P + Z omega/m`` adds an m-th
root of a primitive ``omega``; for a primitive ``zeta`` with
``omega + zeta = 0 (mod m)`` the map ``phi_zeta`` sends the extended lattice
onto ``P / Z zeta``, which is identified with ``Z`` through the determinant
pairing against ``zeta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InputError, certify


@dataclass(frozen=True)
class LatticeVector:
    x: int
    y: int

    def __add__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector(self.x + other.x, self.y + other.y)

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        return LatticeVector(self.x - other.x, self.y - other.y)

    def __mul__(self, k: int) -> LatticeVector:
        return LatticeVector(k * self.x, k * self.y)

    __rmul__ = __mul__

    def __neg__(self) -> LatticeVector:
        return LatticeVector(-self.x, -self.y)

    def __iter__(self):
        yield self.x
        yield self.y

    @property
    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def is_primitive(v: LatticeVector) -> bool:
    if v.is_zero:
        raise InputError("the zero vector has no primitivity")
    return gcd(v.x, v.y) == 1


def solve_diophantine(a: int, b: int) -> tuple[int, int]:
    """Bezout pair ``(x, y)`` with ``a*x + b*y = 1`` and ``|x|`` as small as possible.

    Ties (possible only when ``|b| = 2``) go to ``x >= 0``; when ``b = 0`` the
    free ``y`` is taken to be 0.
    """
    if gcd(a, b) != 1:
        raise InputError(f"gcd({a}, {b}) != 1; a*x + b*y = 1 has no solution")
    if b == 0:
        return a, 0  # a = +-1
    # extended Euclid
    old_r, r = a, b
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    x0 = old_s * old_r  # old_r is +-1
    n = abs(b)
    x = x0 % n
    if x > n - x:
        x -= n
    y = (1 - a * x) // b
    certify(a * x + b * y == 1, "Bezout identity failed")
    return x, y


@dataclass(frozen=True)
class ExtendedLatticeElement:
    """``base + k * omega / m`` kept with ``0 <= k < m``."""

    base: LatticeVector
    omega: LatticeVector
    m: int
    k: int = 0

    def __post_init__(self):
        if self.m <= 0:
            raise InputError("denominator m must be positive")
        if not is_primitive(self.omega):
            raise InputError(f"omega {tuple(self.omega)} is not primitive")
        carry, k = divmod(self.k, self.m)
        if carry:
            object.__setattr__(self, "base", self.base + carry * self.omega)
            object.__setattr__(self, "k", k)

    def __add__(self, other: ExtendedLatticeElement) -> ExtendedLatticeElement:
        if (self.omega, self.m) != (other.omega, other.m):
            raise InputError("cannot add elements of different extended lattices")
        return ExtendedLatticeElement(self.base + other.base, self.omega, self.m, self.k + other.k)

    @classmethod
    def fraction(cls, omega: LatticeVector, m: int) -> ExtendedLatticeElement:
        """The element ``omega / m``."""
        return cls(LatticeVector(0, 0), omega, m, 1)

    @classmethod
    def lattice(cls, v: LatticeVector, omega: LatticeVector, m: int) -> ExtendedLatticeElement:
        return cls(v, omega, m, 0)


@dataclass(frozen=True)
class ZetaChoice:
    zeta: LatticeVector
    t: int
    omega: LatticeVector
    m: int


def find_zeta(omega: LatticeVector, m: int, t: int = 0) -> ZetaChoice:
    """Member ``t`` of the family ``zeta = (m*y - a, -m*x - b)``, ``(x, y) = (x* + b t, y* - a t)``."""
    if not is_primitive(omega):
        raise InputError(f"omega {tuple(omega)} is not primitive")
    if m <= 1:
        raise InputError("m must be greater than 1")
    a, b = omega.x, omega.y
    xs, ys = solve_diophantine(a, b)
    x, y = xs + b * t, ys - a * t
    zeta = LatticeVector(m * y - a, -m * x - b)
    certify(is_primitive(zeta), f"zeta {tuple(zeta)} is not primitive")
    s = omega + zeta
    certify(s.x % m == 0 and s.y % m == 0, f"omega + zeta = {tuple(s)} not in {m}Z+{m}Z")
    return ZetaChoice(zeta, t, omega, m)


def quotient_image(v: LatticeVector, zeta: LatticeVector) -> int:
    """Image of ``v`` under ``P -> P / Z zeta = Z``, i.e. ``det(zeta; v)``."""
    if not is_primitive(zeta):
        raise InputError(f"zeta {tuple(zeta)} is not primitive")
    return zeta.x * v.y - zeta.y * v.x


def phi_zeta(e: ExtendedLatticeElement, z: ZetaChoice) -> int:
    if (e.omega, e.m) != (z.omega, z.m):
        raise InputError("element and zeta choice live over different (omega, m)")
    shifted = z.omega + z.zeta
    lift = LatticeVector(shifted.x // z.m, shifted.y // z.m)
    q_lift = quotient_image(lift, z.zeta)
    # well-definedness: m * phi(omega/m) must equal phi(omega)
    certify(z.m * q_lift - quotient_image(z.omega, z.zeta) == quotient_image(z.zeta, z.zeta) == 0,
            "phi_zeta is not well defined on omega/m")
    return quotient_image(e.base, z.zeta) + e.k * q_lift
