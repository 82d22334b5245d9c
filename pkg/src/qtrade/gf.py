"""Exact arithmetic in GF(q), q = p^m.

Elements are plain integers in ``range(q)``.  The base-p digits of an
element are the coefficients of a polynomial over GF(p), constant term in
the least significant digit, reduced modulo a fixed monic irreducible
polynomial of degree m.  For m = 1 this is ordinary arithmetic mod p.

Addition, multiplication, negation and inversion tables are built once per
field from the polynomial arithmetic and cached; the public ``fe_*``
functions are thin lookups.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional, Sequence

from .errors import FieldError, ZeroInversion

DEFAULT_MAX_Q = 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise FieldError."""
    if q < 2:
        raise FieldError(f"q={q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, r = 0, q
    while r % p == 0:
        r //= p
        m += 1
    if r != 1:
        raise FieldError(f"q={q} is not a prime power")
    return p, m


# -- polynomials over GF(p): coefficient tuples, low degree first ---------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    b = _trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        f = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = (a[shift + i] - f * c) % p
        _trim(a)
    return a


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg//2."""
    f = _trim(list(modulus))
    deg = len(f) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m in index order (x^2+x+1 for GF(4))."""
    if m == 1:
        return (0, 1)
    for low in range(p ** m):
        coeffs = [(low // p ** i) % p for i in range(m)] + [1]
        if coeffs[0] != 0 and is_irreducible(coeffs, p):
            return tuple(coeffs)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    p: int
    m: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise FieldError("extension degree must be positive")
        if self.m > 1:
            mod = tuple(int(c) % self.p for c in self.modulus)
            if len(mod) != self.m + 1 or mod[-1] != 1:
                raise FieldError(f"modulus {list(self.modulus)} is not monic of degree {self.m}")
            if not is_irreducible(mod, self.p):
                raise FieldError(f"modulus {list(self.modulus)} is reducible over GF({self.p})")
            object.__setattr__(self, "modulus", mod)
        else:
            object.__setattr__(self, "modulus", (0, 1))

    @property
    def q(self) -> int:
        return self.p ** self.m

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "FieldSpec":
        return cls(int(d["p"]), int(d["m"]), tuple(d.get("modulus", (0, 1))))


def field_spec(q: int, modulus: Optional[Sequence[int]] = None,
               max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Build the FieldSpec for GF(q), using the default modulus unless given."""
    if q > max_q:
        raise FieldError(f"q={q} exceeds the configured cap {max_q}")
    p, m = prime_power(q)
    if modulus is None:
        modulus = default_modulus(p, m)
    return FieldSpec(p, m, tuple(modulus))


class _Tables:
    __slots__ = ("add", "mul", "neg", "inv")

    def __init__(self, spec: FieldSpec):
        p, m, q = spec.p, spec.m, spec.q
        digits = [[(a // p ** i) % p for i in range(m)] for a in range(q)]

        def to_index(c):
            return sum(int(x) * p ** i for i, x in enumerate(c))

        self.add = [[to_index([(x + y) % p for x, y in zip(digits[a], digits[b])])
                     for b in range(q)] for a in range(q)]
        self.neg = [to_index([(-x) % p for x in digits[a]]) for a in range(q)]
        mul = [[0] * q for _ in range(q)]
        for a in range(q):
            for b in range(a, q):
                prod = [0] * (2 * m - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for j, y in enumerate(digits[b]):
                            prod[i + j] = (prod[i + j] + x * y) % p
                red = _poly_mod(prod, spec.modulus, p) if m > 1 else prod
                mul[a][b] = mul[b][a] = to_index(red)
        self.mul = mul
        # Fermat: a^(q-2) is the inverse of a nonzero a
        inv = [0] * q
        for a in range(1, q):
            r, base, e = 1, a, q - 2
            while e:
                if e & 1:
                    r = mul[r][base]
                base = mul[base][base]
                e >>= 1
            inv[a] = r
        self.inv = inv


@lru_cache(maxsize=None)
def tables(spec: FieldSpec) -> _Tables:
    return _Tables(spec)


def fe_add(a: int, b: int, spec: FieldSpec) -> int:
    return tables(spec).add[a][b]


def fe_sub(a: int, b: int, spec: FieldSpec) -> int:
    t = tables(spec)
    return t.add[a][t.neg[b]]


def fe_neg(a: int, spec: FieldSpec) -> int:
    return tables(spec).neg[a]


def fe_mul(a: int, b: int, spec: FieldSpec) -> int:
    return tables(spec).mul[a][b]


def fe_inv(a: int, spec: FieldSpec) -> int:
    if a == 0:
        raise ZeroInversion("0 has no multiplicative inverse")
    return tables(spec).inv[a]
