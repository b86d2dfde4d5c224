"""Positive definite binary quadratic forms, Gauss composition and the form
class group Cl(D), genus characters, and CM points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath

from .arith import (
    DiscriminantError,
    check_fundamental,
    kronecker,
    prime_divisors,
    roots_of_unity,
)
from .precision import PrecisionContext


@dataclass(frozen=True, order=True)
class BinaryQuadraticForm:
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_positive_definite(self) -> bool:
        return self.a > 0 and self.discriminant < 0

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if b < 0 and (-b == a or a == c):
            return False
        return True

    def to_json(self) -> list:
        return [self.a, self.b, self.c]

    @classmethod
    def from_json(cls, triple) -> "BinaryQuadraticForm":
        a, b, c = (int(t) for t in triple)
        return cls(a, b, c)

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


Form = BinaryQuadraticForm


def _check_definite(f: Form) -> None:
    if not f.is_positive_definite():
        raise ValueError(f"{f} is not positive definite")


def reduce(f: Form) -> Form:
    """Unique reduced representative of the SL2(Z)-class of f."""
    _check_definite(f)
    a, b, c = f.a, f.b, f.c
    while True:
        # normalize: -a < b <= a
        if not (-a < b <= a):
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return Form(a, b, c)


def principal_form(D: int) -> Form:
    mu = D % 2
    return Form(1, mu, (mu - D) // 4)


def compose(f: Form, g: Form) -> Form:
    """Gauss composition via Dirichlet's united forms, reduced."""
    D = f.discriminant
    if g.discriminant != D:
        raise ValueError(f"cannot compose {f} (D={D}) with {g} (D={g.discriminant})")
    _check_definite(f)
    _check_definite(g)
    a1, b1, _ = f.a, f.b, f.c
    a2, b2, _ = g.a, g.b, g.c
    s = (b1 + b2) // 2
    # u*a1 + v*a2 + w*s = e = gcd(a1, a2, s)
    e1, x1, y1 = _xgcd(a1, a2)
    e, x2, w = _xgcd(e1, s)
    u, v = x2 * x1, x2 * y1
    A = a1 * a2 // (e * e)
    num = u * a1 * b2 + v * a2 * b1 + w * (b1 * b2 + D) // 2
    B = (num // e) % (2 * A)
    C = (B * B - D) // (4 * A)
    h = Form(A, B, C)
    assert h.discriminant == D
    return reduce(h)


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def inverse(f: Form) -> Form:
    return reduce(Form(f.a, -f.b, f.c))


def square_class(f: Form) -> Form:
    return compose(f, f)


def reduced_forms(D: int) -> list:
    """All reduced primitive forms of discriminant D, sorted."""
    out = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (b < 0 and a == c):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            out.append(Form(a, b, c))
        a += 1
    return sorted(out)


@dataclass(frozen=True)
class FormClassGroup:
    """Cl(D) with its classes as reduced forms and the composition table."""

    discriminant: int
    classes: tuple
    table: tuple
    w: int
    _index: dict = field(repr=False, compare=False, hash=False, default=None)

    @property
    def h(self) -> int:
        return len(self.classes)

    @property
    def identity(self) -> int:
        return self.index(principal_form(self.discriminant))

    def index(self, f: Form) -> int:
        return self._index[reduce(f)]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inverse_index(self, i: int) -> int:
        return self.index(inverse(self.classes[i]))

    def power(self, i: int, k: int) -> int:
        r = self.identity
        for _ in range(k):
            r = self.table[r][i]
        return r

    def element_order(self, i: int) -> int:
        k, r = 1, i
        while r != self.identity:
            r = self.table[r][i]
            k += 1
        return k

    def squares(self) -> list:
        return sorted({self.table[i][i] for i in range(self.h)})

    def to_json(self) -> dict:
        return {
            "D": self.discriminant,
            "h": self.h,
            "w": self.w,
            "classes": [f.to_json() for f in self.classes],
            "table": [list(row) for row in self.table],
        }


@lru_cache(maxsize=256)
def class_group(D: int) -> FormClassGroup:
    check_fundamental(D)
    classes = tuple(reduced_forms(D))
    index = {f: i for i, f in enumerate(classes)}
    table = tuple(
        tuple(index[compose(f, g)] for g in classes) for f in classes
    )
    return FormClassGroup(D, classes, table, roots_of_unity(D), index)


def genus_character(p: int, f: Form) -> int:
    """Value of the genus character attached to the odd prime p | D on the class of f."""
    D = f.discriminant
    if p % 2 == 0 or D % p:
        raise ValueError(f"p={p} must be an odd prime dividing D={D}")
    pstar = p if p % 4 == 1 else -p
    box = 20
    while True:
        for x in range(-box, box + 1):
            for y in range(-box, box + 1):
                m = f(x, y)
                if m > 0 and math.gcd(m, D) == 1:
                    return kronecker(pstar, m)
        box *= 2


def genus(f: Form) -> dict:
    """Genus vector: odd prime p | D  ->  value of the genus character."""
    D = f.discriminant
    return {p: genus_character(p, f) for p in prime_divisors(D) if p % 2}


@dataclass(frozen=True)
class CMPoint:
    form: Form
    alpha: mpmath.mpc
    y: mpmath.mpf


def cm_point(f: Form, ctx: PrecisionContext | None = None) -> CMPoint:
    """Root alpha = (-b + i sqrt|D|) / 2a of f(tau, 1) = 0 in the upper half-plane."""
    _check_definite(f)
    ctx = ctx or PrecisionContext()
    with ctx.workprec():
        y = mpmath.sqrt(-f.discriminant) / (2 * f.a)
        alpha = mpmath.mpc(mpmath.mpf(-f.b) / (2 * f.a), y)
    return CMPoint(f, alpha, y)


__all__ = [
    "BinaryQuadraticForm",
    "CMPoint",
    "DiscriminantError",
    "FormClassGroup",
    "class_group",
    "cm_point",
    "compose",
    "genus",
    "genus_character",
    "inverse",
    "principal_form",
    "reduce",
    "reduced_forms",
    "square_class",
]
