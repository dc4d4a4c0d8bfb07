"""Exact arithmetic in GF(q) for prime-power q.

Field elements are canonically encoded as integers in [0, q): the element
with coefficient vector (c_0, ..., c_{k-1}) over GF(p) is the integer
sum(c_i * p**i).  All arithmetic below the table limit runs off dense
q x q lookup tables built once per field; the tables themselves are
produced from a discrete-log pair (exp/log) so construction is O(q^2)
in numpy rather than O(q^2) polynomial multiplications.

The modulus is the lexicographically least monic irreducible of degree k,
"least" meaning smallest integer encoding of the non-leading coefficients.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, GroupSpecError

Q_CAP = 1 << 16
TABLE_LIMIT = 4096


# ---------------------------------------------------------------------------
# small number theory helpers

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization as {prime: exponent}; trial division."""
    if n <= 0:
        raise DomainError(f"cannot factor {n}")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power_split(q: int) -> tuple[int, int]:
    """Write q = p**k for prime p, or raise DomainError."""
    f = factorize(q)
    if len(f) != 1:
        raise DomainError(f"{q} is not a prime power")
    (p, k), = f.items()
    return p, k


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    out = 1
    while n % p == 0:
        out *= p
        n //= p
    return out


def p_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        v += 1
        n //= p
    return v


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(p), little-endian coefficient lists

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_rem(out, mod, p)


def _poly_rem(a, mod, p):
    a = list(a)
    dm = len(mod) - 1
    lead_inv = pow(mod[-1], p - 2, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * lead_inv) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _poly_trim(a)
    return a


def _poly_powmod(a, e, mod, p):
    result = [1]
    base = _poly_rem(a, mod, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a = _poly_rem(a, b, p)
        a, b = b, a
    return a


def _is_irreducible(mod, p):
    """mod monic of degree k >= 1 over GF(p)."""
    k = len(mod) - 1
    if k == 1:
        return True
    if mod[0] == 0:
        return False
    x = [0, 1]
    # x^(p^k) == x mod f, and gcd(x^(p^(k/r)) - x, f) == 1 for prime r | k
    xp = _poly_powmod(x, p ** k, mod, p)
    if _poly_sub(xp, x, p):
        return False
    for d in {k // r for r in factorize(k)}:
        g = _poly_gcd(_poly_sub(_poly_powmod(x, p ** d, mod, p), x, p), mod, p)
        if len(g) - 1 >= 1:
            return False
    return True


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _poly_trim(out)


def _least_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Monic degree-k irreducible over GF(p) with least non-leading encoding."""
    if k == 1:
        return (0, 1)
    for low in range(p ** k):
        coeffs = []
        v = low
        for _ in range(k):
            coeffs.append(v % p)
            v //= p
        mod = coeffs + [1]
        if _is_irreducible(mod, p):
            return tuple(mod)
    raise DomainError(f"no irreducible of degree {k} over GF({p})")  # pragma: no cover


# ---------------------------------------------------------------------------

class FieldSpec:
    """GF(q), q = char**degree, with deterministic modulus and lookup tables.

    Immutable after construction; all element operations are pure functions
    of integer encodings, so instances are safe to share across workers.
    """

    def __init__(self, q: int):
        if q < 2 or q > Q_CAP:
            raise DomainError(f"field size {q} outside supported range [2, {Q_CAP}]")
        self.q = q
        self.char, self.degree = prime_power_split(q)
        self.modulus = _least_irreducible(self.char, self.degree)
        self._build_tables()

    # -- raw polynomial-level ops (used to bootstrap the tables) -----------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.degree):
            out.append(a % self.char)
            a //= self.char
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        v = 0
        for c in reversed(list(coeffs)):
            v = v * self.char + int(c) % self.char
        return v

    def _raw_mul(self, a: int, b: int) -> int:
        prod = _poly_mulmod(list(self.coeffs(a)), list(self.coeffs(b)),
                            list(self.modulus), self.char)
        return self.from_coeffs(prod + [0] * self.degree)

    def _raw_pow(self, a: int, e: int) -> int:
        result, base = 1, a
        while e:
            if e & 1:
                result = self._raw_mul(result, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return result

    def _raw_inv(self, a: int) -> int:
        """Inverse by extended Euclid on coefficient polynomials."""
        if a == 0:
            raise DomainError("zero is not invertible")
        p = self.char
        r0, r1 = list(self.modulus), _poly_trim(list(self.coeffs(a)))
        s0, s1 = [], [1]
        while r1:
            # divide r0 by r1
            q_poly, rem = _poly_divmod(r0, r1, p)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mulmod_plain(q_poly, s1, p), p)
        # r0 is a nonzero constant gcd
        c_inv = pow(r0[0], p - 2, p)
        inv = [(c_inv * c) % p for c in s0]
        inv = _poly_rem(inv, list(self.modulus), p)
        return self.from_coeffs(inv + [0] * self.degree)

    # -- table construction -------------------------------------------------

    def _build_tables(self):
        q, p = self.q, self.char
        # primitive element: least encoding with multiplicative order q-1
        fac = factorize(q - 1) if q > 2 else {}
        prim = 1
        for g in range(1, q):
            if all(self._raw_pow(g, (q - 1) // r) != 1 for r in fac):
                prim = g
                break
        self.primitive = prim

        if q > TABLE_LIMIT:
            self.exp = self.log = self.add = self.mul = self.neg = self.inv_table = None
            return

        exp = np.empty(q - 1, dtype=np.int32)
        acc = 1
        for i in range(q - 1):
            exp[i] = acc
            acc = self._raw_mul(acc, prim)
        log = np.zeros(q, dtype=np.int32)
        log[exp] = np.arange(q - 1)
        self.exp, self.log = exp, log

        dtype = np.uint8 if q <= 256 else np.int32
        mul = np.zeros((q, q), dtype=dtype)
        nz = exp  # all nonzero values
        mul[np.ix_(nz, nz)] = exp[(log[nz][:, None] + log[nz][None, :]) % (q - 1)]
        self.mul = mul

        digits = np.zeros((q, self.degree), dtype=np.int64)
        vals = np.arange(q)
        for i in range(self.degree):
            digits[:, i] = vals % p
            vals = vals // p
        summed = (digits[:, None, :] + digits[None, :, :]) % p
        add = np.zeros((q, q), dtype=np.int64)
        for i in reversed(range(self.degree)):
            add = add * p + summed[:, :, i]
        self.add = add.astype(dtype)

        negd = (-digits) % p
        neg = np.zeros(q, dtype=np.int64)
        for i in reversed(range(self.degree)):
            neg = neg * p + negd[:, i]
        self.neg = neg.astype(dtype)

        inv = np.zeros(q, dtype=dtype)
        inv[exp] = exp[(-(np.arange(q - 1))) % (q - 1)]
        self.inv_table = inv

    # -- public element ops --------------------------------------------------

    def add_el(self, a: int, b: int) -> int:
        if self.add is not None:
            return int(self.add[a, b])
        s = [(x + y) % self.char for x, y in zip(self.coeffs(a), self.coeffs(b))]
        return self.from_coeffs(s)

    def mul_el(self, a: int, b: int) -> int:
        if self.mul is not None:
            return int(self.mul[a, b])
        return self._raw_mul(a, b)

    def neg_el(self, a: int) -> int:
        if self.neg is not None:
            return int(self.neg[a])
        return self.from_coeffs([(-c) % self.char for c in self.coeffs(a)])

    def inv_el(self, a: int) -> int:
        if a == 0:
            raise DomainError("zero is not invertible")
        if self.inv_table is not None:
            return int(self.inv_table[a])
        return self._raw_inv(a)

    def pow_el(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise DomainError("zero is not invertible")
            return 0
        e %= (self.q - 1)
        if self.log is not None:
            return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])
        return self._raw_pow(a, e)

    def mult_order(self, a: int) -> int:
        if a == 0:
            raise DomainError("multiplicative order of zero is undefined")
        m = self.q - 1
        if self.log is not None:
            return m // math.gcd(m, int(self.log[a]))
        order = m
        for r, _ in factorize(m).items():
            while order % r == 0 and self._raw_pow(a, order // r) == 1:
                order //= r
        return order

    def element_of_order(self, m: int) -> int:
        """Element of F_q^x of multiplicative order m (m must divide q-1)."""
        if (self.q - 1) % m != 0:
            raise DomainError(f"no element of order {m} in GF({self.q})^x")
        return self.pow_el(self.primitive, (self.q - 1) // m)

    def subgroup_values(self, m: int) -> frozenset[int]:
        """The unique order-m subgroup of F_q^x as a set of encodings."""
        g = self.element_of_order(m)
        vals, acc = set(), 1
        for _ in range(m):
            vals.add(acc)
            acc = self.mul_el(acc, g)
        return frozenset(vals)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and other.q == self.q

    def __hash__(self):
        return hash(("FieldSpec", self.q))


def _poly_divmod(a, b, p):
    a = list(a)
    q_out = [0] * max(1, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b) and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        q_out[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _poly_trim(a)
    return _poly_trim(q_out), a


def _poly_mulmod_plain(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


@lru_cache(maxsize=None)
def field_spec(q: int) -> FieldSpec:
    return FieldSpec(q)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """A GF(q) element bound to its field; thin wrapper over the encoding."""

    spec: FieldSpec
    val: int

    def __post_init__(self):
        if not 0 <= self.val < self.spec.q:
            raise DomainError(f"encoding {self.val} outside GF({self.spec.q})")

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.spec.coeffs(self.val)

    def _check(self, other: "FieldElement"):
        if self.spec != other.spec:
            raise DomainError("field elements from mismatched specs")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.add_el(self.val, other.val))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.spec, self.spec.mul_el(self.val, other.val))

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg_el(self.val))

    def __sub__(self, other):
        return self + (-other)

    def inverse(self):
        return FieldElement(self.spec, self.spec.inv_el(self.val))

    def __pow__(self, e: int):
        return FieldElement(self.spec, self.spec.pow_el(self.val, e))

    def __str__(self):
        return "[" + ",".join(str(c) for c in self.coeffs) + "]"


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def mult_order(a: FieldElement) -> int:
    return a.spec.mult_order(a.val)


def primitive_element(spec: FieldSpec) -> FieldElement:
    return FieldElement(spec, spec.primitive)


_FIELD_RE = re.compile(r"^GF\((\d+)\)$")


def parse_field(text: str) -> FieldSpec:
    """Parse a CLI field literal like "GF(9)"."""
    m = _FIELD_RE.match(text.strip())
    if not m:
        raise GroupSpecError(f"malformed field literal: {text!r}")
    try:
        return field_spec(int(m.group(1)))
    except DomainError as exc:
        raise GroupSpecError(str(exc)) from exc
