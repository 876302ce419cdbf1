"""Exact coefficient fields for rank computations.

Supports the rationals, prime fields GF(p), and small extension fields
GF(p^t) with a fixed modulus table, plus field traces and additive
characters valued in a prime field that contains a p-th root of unity.

Element representations are canonical and hashable: a reduced
``fractions.Fraction`` in characteristic zero, an ``int`` in ``[0, p)``
for prime fields, and a length-t tuple of such ints (coefficient of x^i
at position i) for extension fields.  A ``FieldCtx`` carries the
operations; elements themselves are plain values.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

# Lexicographically least monic irreducible modulus per supported (p, t),
# as little-endian coefficient tuples without the leading 1.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1),        # x^2 + x + 1
    (2, 3): (1, 1, 0),     # x^3 + x + 1
    (2, 4): (1, 1, 0, 0),  # x^4 + x + 1
    (3, 2): (1, 0),        # x^2 + 1
    (3, 3): (1, 2, 0),     # x^3 + 2x + 1
    (5, 2): (2, 0),        # x^2 + 2
}

_FIELD_RE = re.compile(r"^(q0|gf(\d+)(\^(\d+))?)$")


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _poly_mulmod(a: tuple[int, ...], b: tuple[int, ...], modulus: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Multiply two little-endian coefficient tuples mod (modulus, p).

    ``modulus`` holds the low coefficients of a monic polynomial of
    degree t = len(modulus), so x^t = -modulus.
    """
    t = len(modulus)
    prod = [0] * (2 * t - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(2 * t - 2, t - 1, -1):
        c = prod[d]
        if c:
            prod[d] = 0
            for k, mk in enumerate(modulus):
                prod[d - t + k] = (prod[d - t + k] - c * mk) % p
    return tuple(prod[:t])


def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num by monic-normalizable den over GF(p), little-endian."""
    num = [c % p for c in num]
    den = [c % p for c in den]
    while den and den[-1] == 0:
        den.pop()
    dd = len(den) - 1
    lead_inv = pow(den[-1], p - 2, p)
    while len(num) - 1 >= dd and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) - 1 < dd:
            break
        shift = len(num) - 1 - dd
        factor = (num[-1] * lead_inv) % p
        for k, dk in enumerate(den):
            num[shift + k] = (num[shift + k] - factor * dk) % p
    return num


def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial-divide the monic polynomial x^t + modulus by every monic
    polynomial of degree 1..t//2 over GF(p).  Desk scale only."""
    t = len(modulus)
    full = list(modulus) + [1]
    for d in range(1, t // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            den = list(low) + [1]
            rem = _poly_rem(list(full), den, p)
            if not any(rem):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Declares a field: characteristic 0 (rationals) or a prime power."""

    characteristic: int
    degree: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        c, t = self.characteristic, self.degree
        if c == 0:
            if t != 1 or self.modulus:
                raise ValueError("characteristic 0 admits no extension")
            return
        if not is_prime(c):
            raise ValueError(f"characteristic {c} is not 0 or prime")
        if t < 1:
            raise ValueError("degree must be >= 1")
        if t == 1:
            if self.modulus:
                raise ValueError("prime fields take no modulus")
            return
        if len(self.modulus) != t:
            raise ValueError("modulus must list the t low coefficients")
        if any(not (0 <= m < c) for m in self.modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not _is_irreducible(self.modulus, c):
            raise ValueError(f"modulus {self.modulus} is reducible over GF({c})")


class FieldCtx:
    """Operation carrier for one field; construct via make_field/parse_field."""

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.char = spec.characteristic
        self.degree = spec.degree
        self.order = 0 if self.char == 0 else self.char ** self.degree
        if self.char == 0:
            self.zero, self.one = Fraction(0), Fraction(1)
        elif self.degree == 1:
            self.zero, self.one = 0, 1
        else:
            t = self.degree
            self.zero = (0,) * t
            self.one = (1,) + (0,) * (t - 1)

    # -- identity ----------------------------------------------------------

    @property
    def field_string(self) -> str:
        if self.char == 0:
            return "q0"
        if self.degree == 1:
            return f"gf{self.char}"
        return f"gf{self.char}^{self.degree}"

    def __repr__(self) -> str:
        return f"FieldCtx({self.field_string})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    # -- arithmetic ---------------------------------------------------------

    def add(self, a, b):
        if self.char == 0 or self.degree == 1:
            return (a + b) % self.char if self.char else a + b
        p = self.char
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.char == 0 or self.degree == 1:
            return (a - b) % self.char if self.char else a - b
        p = self.char
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        if self.char == 0 or self.degree == 1:
            return (-a) % self.char if self.char else -a
        p = self.char
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        if self.char == 0 or self.degree == 1:
            return (a * b) % self.char if self.char else a * b
        return _poly_mulmod(a, b, self.spec.modulus, self.char)

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError(f"inverse of zero in {self.field_string}")
        if self.char == 0:
            return 1 / a
        if self.degree == 1:
            return pow(a, self.char - 2, self.char)
        return self.pow(a, self.order - 2)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        acc, base = self.one, a
        while k:
            if k & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            k >>= 1
        return acc

    def is_zero(self, a) -> bool:
        return a == self.zero

    def embed(self, n: int):
        """Image of the integer n under the canonical ring map."""
        if self.char == 0:
            return Fraction(n)
        v = n % self.char
        if self.degree == 1:
            return v
        return (v,) + (0,) * (self.degree - 1)

    def contains(self, x) -> bool:
        if self.char == 0:
            return isinstance(x, Fraction)
        if self.degree == 1:
            return isinstance(x, int) and 0 <= x < self.char
        return (
            isinstance(x, tuple)
            and len(x) == self.degree
            and all(isinstance(c, int) and 0 <= c < self.char for c in x)
        )

    # -- enumeration and codecs ----------------------------------------------

    def elements(self):
        """All field elements in canonical index order; finite fields only."""
        if self.char == 0:
            raise ValueError("cannot enumerate the rationals")
        if self.degree == 1:
            yield from range(self.char)
        else:
            for rev in itertools.product(range(self.char), repeat=self.degree):
                yield tuple(reversed(rev))

    def element_index(self, x) -> int:
        """Position of x in elements(): sum of c_i p^i over coefficients."""
        if self.degree == 1:
            return x
        return sum(c * self.char ** i for i, c in enumerate(x))

    def element_at(self, idx: int):
        if not 0 <= idx < self.order:
            raise ValueError(f"element index {idx} out of range")
        if self.degree == 1:
            return idx
        coeffs = []
        for _ in range(self.degree):
            coeffs.append(idx % self.char)
            idx //= self.char
        return tuple(coeffs)

    def to_str(self, x) -> str:
        if self.char == 0:
            return str(x)
        if self.degree == 1:
            return str(x)
        return ",".join(str(c) for c in x)

    def from_str(self, s: str):
        if self.char == 0:
            return Fraction(s)
        if self.degree == 1:
            v = int(s)
            if not 0 <= v < self.char:
                raise ValueError(f"{s} is not canonical in {self.field_string}")
            return v
        x = tuple(int(c) for c in s.split(","))
        if not self.contains(x):
            raise ValueError(f"{s} is not canonical in {self.field_string}")
        return x


def make_field(spec: FieldSpec) -> FieldCtx:
    return FieldCtx(spec)


def parse_field(s: str) -> FieldCtx:
    """Parse a field string: q0, gf<p>, or gf<p>^<t>."""
    m = _FIELD_RE.match(s)
    if not m:
        raise ValueError(f"bad field string: {s!r}")
    if m.group(1) == "q0":
        return make_field(FieldSpec(0))
    p = int(m.group(2))
    if not is_prime(p):
        raise ValueError(f"bad field string: {s!r} (gf takes a prime)")
    t = int(m.group(4)) if m.group(4) else 1
    if t == 1:
        return make_field(FieldSpec(p))
    key = (p, t)
    if key not in DEFAULT_MODULI:
        raise ValueError(f"no fixed modulus table entry for GF({p}^{t})")
    return make_field(FieldSpec(p, t, DEFAULT_MODULI[key]))


RATIONALS = parse_field("q0")


def ground_field(q: int) -> FieldCtx:
    """Finite field of order q (prime power), with the fixed modulus table."""
    if q < 2:
        raise ValueError(f"field order {q} is not a prime power")
    p = q
    for d in range(2, q + 1):
        if d * d > q:
            break
        if q % d == 0:
            p = d
            break
    t, m = 0, q
    while m % p == 0 and m > 1:
        m //= p
        t += 1
    if m != 1 or not is_prime(p):
        raise ValueError(f"field order {q} is not a prime power")
    if t == 1:
        return make_field(FieldSpec(p))
    return parse_field(f"gf{p}^{t}")


# -- traces and additive characters ------------------------------------------


def smallest_character_host(p: int) -> FieldCtx:
    """Prime field of least order ell with ell = 1 (mod p), ell != p."""
    ell = 2
    while True:
        if ell != p and is_prime(ell) and ell % p == 1:
            return make_field(FieldSpec(ell))
        ell += 1


def find_root_of_unity(p: int, host: FieldCtx) -> int:
    """A fixed element of multiplicative order exactly p in the host prime field."""
    if host.char == 0 or host.degree != 1:
        raise ValueError("character host must be a prime field")
    ell = host.char
    if ell == p or ell % p != 1:
        raise ValueError(f"GF({ell}) has no primitive p-th root of unity for p={p}")
    for g in range(2, ell):
        z = pow(g, (ell - 1) // p, ell)
        if z != 1:
            return z
    raise AssertionError("unreachable: no generator found")


@dataclass
class CharacterCtx:
    """Additive character theta(x) = zeta^Tr(x) of a finite ground field,
    valued in a prime host field containing a p-th root of unity zeta."""

    q_ctx: FieldCtx
    host: FieldCtx
    zeta: int
    trace_table: dict

    def trace(self, x) -> int:
        return self.trace_table[x]

    def character(self, x) -> int:
        return pow(self.zeta, self.trace_table[x], self.host.char)


def trace(cctx: CharacterCtx, x) -> int:
    """Field trace of x down to the prime subfield, as an int in [0, p)."""
    if not cctx.q_ctx.contains(x):
        raise ValueError(f"{x!r} is not an element of {cctx.q_ctx.field_string}")
    return cctx.trace(x)


def additive_character(cctx: CharacterCtx, x) -> int:
    """theta(x) = zeta^Tr(x), an element of the host prime field."""
    if not cctx.q_ctx.contains(x):
        raise ValueError(f"{x!r} is not an element of {cctx.q_ctx.field_string}")
    return cctx.character(x)


def make_character_ctx(q_ctx: FieldCtx, host: FieldCtx | None = None) -> CharacterCtx:
    """Build the character context for a finite ground field.

    The default host is the smallest prime field GF(ell) with
    ell = 1 (mod p) and ell != p, so that a p-th root of unity exists.
    """
    if q_ctx.char == 0:
        raise ValueError("ground field must be finite")
    p = q_ctx.char
    if host is None:
        host = smallest_character_host(p)
    zeta = find_root_of_unity(p, host)
    table = {}
    for x in q_ctx.elements():
        y, acc = x, x
        for _ in range(q_ctx.degree - 1):
            y = q_ctx.pow(y, p)
            acc = q_ctx.add(acc, y)
        if q_ctx.degree == 1:
            t = acc
        else:
            if any(acc[1:]):
                raise AssertionError(f"trace of {x} landed outside the prime subfield")
            t = acc[0]
        table[x] = t
    return CharacterCtx(q_ctx, host, zeta, table)
