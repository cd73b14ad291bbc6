"""Finite fields F_{p^k} in discrete-log (Zech) representation.

Every nonzero element is stored as its exponent with respect to a fixed
primitive element ``r``.  Multiplication is exponent addition, and addition
goes through the Zech table ``1 + r^n = r^z(n)``.  Fields are built on the
Conway polynomial by default, so ``r`` is the class of ``x`` and the
quadratic extension embeds compatibly.

Two layers are exposed:

* :class:`FieldElement` objects with the usual operators, for readable code;
* raw integer exponents (``field.zero_log`` marks zero) and vectorised numpy
  variants, used by the brute-force enumerators.
"""

from __future__ import annotations

import math
import os
import re
from functools import lru_cache
from importlib import resources
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .exceptions import FieldError, FieldMismatchError, InvariantViolation

DEFAULT_MAX_Q = 2**20
MAX_Q_ENV = "RECUR2CODE_MAX_Q"

__all__ = [
    "DEFAULT_MAX_Q",
    "FieldElement",
    "GaloisField",
    "QuadraticExtension",
    "add",
    "build_field",
    "build_quadratic_extension",
    "conway_polynomial",
    "field_for_order",
    "format_element",
    "inv",
    "is_prime",
    "max_field_size",
    "mul",
    "mult_order",
    "neg",
    "parse_element",
    "power",
    "prime_factors",
    "prime_power",
    "relative_trace",
    "sub",
]


# ---------------------------------------------------------------------------
# integer helpers


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in increasing order (trial division)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p^k``; raise :class:`FieldError` if ``q`` is not a prime power."""
    if q < 2:
        raise FieldError(f"field order must be a prime power, got {q}")
    factors = prime_factors(q)
    if len(factors) != 1:
        raise FieldError(f"field order must be a prime power, got {q}")
    p = factors[0]
    k = round(math.log(q, p))
    while p**k < q:
        k += 1
    while p**k > q:
        k -= 1
    return p, k


def max_field_size() -> int:
    """Configured upper bound on q; ``RECUR2CODE_MAX_Q`` overrides the default."""
    raw = os.environ.get(MAX_Q_ENV)
    if raw is None or not raw.strip():
        return DEFAULT_MAX_Q
    try:
        value = int(raw)
    except ValueError:
        raise FieldError(f"{MAX_Q_ENV} must be an integer, got {raw!r}") from None
    if value < 2:
        raise FieldError(f"{MAX_Q_ENV} must be at least 2, got {value}")
    return value


def _least_primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // f, p) != 1 for f in factors):
            return g
    raise AssertionError("unreachable: every prime has a primitive root")


# ---------------------------------------------------------------------------
# Conway table


@lru_cache(maxsize=None)
def _conway_table() -> dict[tuple[int, int], tuple[int, ...]]:
    table = {}
    text = resources.files("recur2code").joinpath("data/conway.txt").read_text()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        p, k, *coeffs = (int(tok) for tok in line.split())
        if len(coeffs) != k + 1 or coeffs[-1] != 1:
            raise FieldError(f"malformed Conway table line: {line!r}")
        table[p, k] = tuple(coeffs)
    return table


def conway_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Conway polynomial for F_{p^k}, coefficients constant term first."""
    try:
        return _conway_table()[p, k]
    except KeyError:
        raise FieldError(f"no Conway polynomial embedded for (p, k) = ({p}, {k})") from None


# ---------------------------------------------------------------------------
# dense polynomial helpers over F_p (coefficient lists, constant term first)


def _poly_mulmod(a: Sequence[int], b: Sequence[int], modulus: Sequence[int], p: int) -> list[int]:
    k = len(modulus) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for i in range(len(prod) - 1, k - 1, -1):
        c = prod[i] % p
        if c:
            for j in range(k + 1):
                prod[i - k + j] -= c * modulus[j]
    out = [c % p for c in prod[:k]]
    return out + [0] * (k - len(out))


def _poly_rem(a: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    # f monic
    a = [c % p for c in a]
    d = len(f) - 1
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            for j in range(d + 1):
                a[i - d + j] = (a[i - d + j] - c * f[j]) % p
    return a[:d]


def _is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive search for a monic factor of degree <= k/2."""
    k = len(modulus) - 1
    if k == 1:
        return True
    if modulus[0] % p == 0:
        return False
    for d in range(1, k // 2 + 1):
        for low in product(range(p), repeat=d):
            if not any(_poly_rem(modulus, list(low) + [1], p)):
                return False
    return True


# ---------------------------------------------------------------------------
# fields


class GaloisField:
    """The finite field F_q, q = p^k, with log/antilog/Zech tables.

    Elements in coefficient form are indexed by ``sum(c_i * p**i)``.  Raw
    element values are exponents in ``range(q - 1)`` plus the sentinel
    ``zero_log == q - 1`` for zero.
    """

    def __init__(self, p: int, k: int, modulus: Sequence[int], *, conway: bool):
        self.p = p
        self.k = k
        self.q = p**k
        self.modulus = tuple(int(c) for c in modulus)
        self.is_conway = conway
        self.order = self.q - 1
        self.zero_log = self.q - 1
        self._neg_shift = 0 if p == 2 else self.order // 2
        self._build_tables()

    # -- construction -------------------------------------------------------

    def _coeffs_of_index(self, idx: int) -> list[int]:
        out = []
        for _ in range(self.k):
            idx, c = divmod(idx, self.p)
            out.append(c)
        return out

    def _index_of_coeffs(self, coeffs: Sequence[int]) -> int:
        idx = 0
        for c in reversed(coeffs):
            idx = idx * self.p + c
        return idx

    def _powers(self, gen: list[int]) -> list[int]:
        """Coefficient indices of gen^0, gen^1, ... until the cycle closes."""
        p, k = self.p, self.k
        one = [1] + [0] * (k - 1)
        seen = [self._index_of_coeffs(one)]
        cur = gen
        by_x = k > 1 and gen == [0, 1] + [0] * (k - 2)
        neg_mod = [(-c) % p for c in self.modulus[:k]]
        while cur != one and len(seen) <= self.order:
            seen.append(self._index_of_coeffs(cur))
            if by_x:
                top = cur[-1]
                cur = [0] + cur[:-1]
                if top:
                    cur = [(c + top * m) % p for c, m in zip(cur, neg_mod)]
            else:
                cur = _poly_mulmod(cur, gen, self.modulus, p)
        return seen

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.q
        if k == 1:
            first = [(-self.modulus[0]) % p]
        else:
            first = [0, 1] + [0] * (k - 2)
        powers = self._powers(first)
        self.generator_is_x = len(powers) == self.order
        if not self.generator_is_x:
            # non-primitive user modulus: fall back to the least primitive element
            for idx in range(2, q):
                powers = self._powers(self._coeffs_of_index(idx))
                if len(powers) == self.order:
                    break
            else:  # pragma: no cover - every finite field has a primitive element
                raise AssertionError("no primitive element found")
        exp = powers
        log = [self.zero_log] * q
        for n, idx in enumerate(exp):
            log[idx] = n
        if log[0] != self.zero_log:
            raise InvariantViolation("zero reached in the power table")
        zech = []
        for n in range(self.order):
            idx = exp[n]
            c0 = idx % p
            zech.append(log[idx - c0 + (c0 + 1) % p])
        self._exp = exp
        self._log = log
        self._zech = zech
        self.exp_table = np.asarray(exp, dtype=np.int64)
        self.log_table = np.asarray(log, dtype=np.int64)
        self.zech_table = np.asarray(zech, dtype=np.int64)

    # -- identity -----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GaloisField):
            return NotImplemented
        return (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.k, self.modulus))

    def __repr__(self) -> str:
        return f"GaloisField(p={self.p}, k={self.k}, modulus={list(self.modulus)})"

    def __reduce__(self):
        return build_field, (self.p, self.k, None if self.is_conway else list(self.modulus))

    # -- raw exponent arithmetic ---------------------------------------------

    def radd(self, x: int, y: int) -> int:
        z0 = self.zero_log
        if x == z0:
            return y
        if y == z0:
            return x
        z = self._zech[(y - x) % self.order]
        return z0 if z == z0 else (x + z) % self.order

    def rneg(self, x: int) -> int:
        if x == self.zero_log:
            return x
        return (x + self._neg_shift) % self.order

    def rsub(self, x: int, y: int) -> int:
        return self.radd(x, self.rneg(y))

    def rmul(self, x: int, y: int) -> int:
        if x == self.zero_log or y == self.zero_log:
            return self.zero_log
        return (x + y) % self.order

    def rinv(self, x: int) -> int:
        if x == self.zero_log:
            raise ZeroDivisionError("inverse of zero")
        return (-x) % self.order

    def rpow(self, x: int, n: int) -> int:
        if x == self.zero_log:
            if n < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0 if n == 0 else self.zero_log
        return (x * n) % self.order

    def rint(self, n: int) -> int:
        """Raw value of the integer ``n`` (image of Z in the prime field)."""
        return self._log[n % self.p]

    # vectorised versions over int64 arrays (broadcasting)

    def vadd(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        z0 = self.zero_log
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        z = self.zech_table[(y - x) % self.order]
        out = np.where(z == z0, z0, (x + z) % self.order)
        out = np.where(x == z0, y, out)
        return np.where(y == z0, x, out)

    def vmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        z0 = self.zero_log
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        return np.where((x == z0) | (y == z0), z0, (x + y) % self.order)

    def vneg(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x)
        return np.where(x == self.zero_log, x, (x + self._neg_shift) % self.order)

    # -- element constructors ------------------------------------------------

    def element(self, raw: int) -> FieldElement:
        return FieldElement(self, raw)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, self.zero_log)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def r(self) -> FieldElement:
        """The canonical primitive element."""
        return FieldElement(self, 1 % self.order) if self.order > 1 else self.one

    def from_int(self, n: int) -> FieldElement:
        return FieldElement(self, self.rint(n))

    def from_coeffs(self, coeffs: Sequence[int]) -> FieldElement:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise FieldError(f"expected at most {self.k} coefficients, got {len(coeffs)}")
        if any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"coefficients must lie in 0..{self.p - 1}: {coeffs}")
        coeffs += [0] * (self.k - len(coeffs))
        return FieldElement(self, self._log[self._index_of_coeffs(coeffs)])

    def coeffs(self, x: FieldElement) -> list[int]:
        self._check(x)
        if x.raw == self.zero_log:
            return [0] * self.k
        return self._coeffs_of_index(self._exp[x.raw])

    def elements(self) -> list[FieldElement]:
        """All elements: zero first, then r^0, r^1, ..."""
        return [self.zero] + [FieldElement(self, n) for n in range(self.order)]

    def nonzero(self) -> list[FieldElement]:
        return [FieldElement(self, n) for n in range(self.order)]

    def _check(self, x: FieldElement) -> None:
        if x.field is not self and x.field != self:
            raise FieldMismatchError(f"element of {x.field!r} used in {self!r}")


class FieldElement:
    """Element of a :class:`GaloisField`; ``raw`` is the exponent or ``zero_log``."""

    __slots__ = ("field", "raw")

    def __init__(self, field: GaloisField, raw: int):
        self.field = field
        self.raw = int(raw)

    @property
    def log(self) -> int | None:
        """Discrete log w.r.t. ``r``, or ``None`` for zero."""
        return None if self.raw == self.field.zero_log else self.raw

    def is_zero(self) -> bool:
        return self.raw == self.field.zero_log

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError("operands belong to different fields")
            return other
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = self.field.from_int(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.raw == other.raw and (self.field is other.field or self.field == other.field)

    def __hash__(self) -> int:
        return hash((self.field, self.raw))

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.radd(self.raw, other.raw))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, self.field.rneg(self.raw))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.rsub(self.raw, other.raw))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, self.field.rmul(self.raw, other.raw))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.rinv(self.raw))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> FieldElement:
        return FieldElement(self.field, self.field.rpow(self.raw, n))

    def __repr__(self) -> str:
        return format_element(self)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# public API


def build_field(
    p: int,
    k: int = 1,
    modulus: Sequence[int] | None = None,
    *,
    max_q: int | None = None,
) -> GaloisField:
    """Build F_{p^k}.

    Without ``modulus`` the embedded Conway polynomial is used (for prime
    fields, ``x - g`` with ``g`` the least primitive root).  A user modulus
    must be monic of degree ``k`` and irreducible over F_p.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic must be prime, got {p}")
    if not isinstance(k, int) or k < 1:
        raise FieldError(f"extension degree must be >= 1, got {k}")
    bound = max_field_size() if max_q is None else max_q
    if p**k > bound:
        raise FieldError(f"field size {p}^{k} = {p**k} exceeds the bound {bound}")
    if modulus is None:
        return _cached_field(p, k, None)
    coeffs = tuple(int(c) for c in modulus)
    if len(coeffs) != k + 1:
        raise FieldError(f"modulus must have {k + 1} coefficients (degree {k}), got {len(coeffs)}")
    if any(not 0 <= c < p for c in coeffs):
        raise FieldError(f"modulus coefficients must lie in 0..{p - 1}")
    if coeffs[-1] != 1:
        raise FieldError("modulus must be monic")
    if not _is_irreducible(coeffs, p):
        raise FieldError(f"modulus {list(coeffs)} is reducible over F_{p}")
    return _cached_field(p, k, coeffs)


@lru_cache(maxsize=64)
def _cached_field(p: int, k: int, modulus: tuple[int, ...] | None) -> GaloisField:
    if modulus is None:
        if k == 1:
            modulus = ((-_least_primitive_root(p)) % p, 1)
        else:
            modulus = conway_polynomial(p, k)
        field = GaloisField(p, k, modulus, conway=True)
        if not field.generator_is_x:
            raise InvariantViolation(f"Conway polynomial for ({p}, {k}) is not primitive")
        return field
    conway = (k == 1 and modulus[0] == (-_least_primitive_root(p)) % p) or (
        (p, k) in _conway_table() and _conway_table()[p, k] == modulus
    )
    return GaloisField(p, k, modulus, conway=conway)


def field_for_order(q: int, modulus: Sequence[int] | None = None, *, max_q: int | None = None) -> GaloisField:
    p, k = prime_power(q)
    return build_field(p, k, modulus, max_q=max_q)


_ELEMENT_RE = re.compile(r"^r\^(\d+)$")


def parse_element(field: GaloisField, text: str) -> FieldElement:
    """Parse ``"0"``, ``"r^<n>"`` or ``"[c0,...,c_{k-1}]"``."""
    s = text.strip()
    if s == "0":
        return field.zero
    m = _ELEMENT_RE.match(s)
    if m:
        n = int(m.group(1))
        return FieldElement(field, n % field.order)
    if s.startswith("[") and s.endswith("]"):
        body = s[1:-1].strip()
        try:
            coeffs = [int(tok) for tok in body.split(",")] if body else []
        except ValueError:
            raise FieldError(f"malformed coefficient vector: {text!r}") from None
        return field.from_coeffs(coeffs)
    raise FieldError(f"malformed element {text!r}; expected '0', 'r^<n>' or '[c0,...]'")


def format_element(x: FieldElement) -> str:
    return "0" if x.is_zero() else f"r^{x.raw}"


def add(x: FieldElement, y: FieldElement) -> FieldElement:
    return x + y


def sub(x: FieldElement, y: FieldElement) -> FieldElement:
    return x - y


def neg(x: FieldElement) -> FieldElement:
    return -x


def mul(x: FieldElement, y: FieldElement) -> FieldElement:
    return x * y


def inv(x: FieldElement) -> FieldElement:
    return x.inverse()


def power(x: FieldElement, n: int) -> FieldElement:
    return x**n


def mult_order(x: FieldElement) -> int:
    """Multiplicative order, ``(q-1) / gcd(q-1, log x)``."""
    if x.is_zero():
        raise ZeroDivisionError("zero has no multiplicative order")
    return x.field.order // math.gcd(x.field.order, x.raw)


# ---------------------------------------------------------------------------
# quadratic extensions


class QuadraticExtension:
    """F_{q^2} over F_q together with the embedding of the base field."""

    def __init__(self, base: GaloisField, ext: GaloisField, embed_raw: list[int]):
        self.base = base
        self.ext = ext
        self.q = base.q
        self._embed = embed_raw
        self._restrict = {raw: n for n, raw in enumerate(embed_raw)}
        self.embed_table = np.asarray(embed_raw + [ext.zero_log], dtype=np.int64)

    def __reduce__(self):
        return build_quadratic_extension, (self.base,)

    def embed(self, x: FieldElement) -> FieldElement:
        self.base._check(x)
        if x.is_zero():
            return self.ext.zero
        return FieldElement(self.ext, self._embed[x.raw])

    __call__ = embed

    def contains(self, z: FieldElement) -> bool:
        """Whether ``z`` lies in the embedded copy of the base field."""
        self.ext._check(z)
        return z.is_zero() or z.raw % (self.q + 1) == 0

    def restrict(self, z: FieldElement) -> FieldElement:
        """Inverse of :meth:`embed`."""
        self.ext._check(z)
        if z.is_zero():
            return self.base.zero
        try:
            return FieldElement(self.base, self._restrict[z.raw])
        except KeyError:
            raise FieldError(f"{z} does not lie in the embedded base field") from None

    def frobenius(self, z: FieldElement) -> FieldElement:
        """z -> z^q, the generator of Gal(F_{q^2}/F_q)."""
        return z**self.q

    def trace(self, z: FieldElement) -> FieldElement:
        return relative_trace(z, self)


@lru_cache(maxsize=64)
def build_quadratic_extension(base: GaloisField) -> QuadraticExtension:
    """Build F_{q^2} on the Conway polynomial of degree 2k and embed ``base``.

    For a Conway base field the image of ``r`` is ``R^(q+1)``.  Otherwise the
    image of ``r`` is found by locating a root of the base modulus in the
    extension and evaluating ``r``'s coefficient vector there.
    """
    p, k = base.p, base.k
    ext = build_field(p, 2 * k)
    q = base.q
    # theta: root of the base modulus inside ext
    mod_coeffs = [ext.rint(c) for c in base.modulus]

    def eval_modulus(raw: np.ndarray) -> np.ndarray:
        acc = np.full(raw.shape, ext.zero_log, dtype=np.int64)
        for c in reversed(mod_coeffs):
            acc = ext.vadd(ext.vmul(acc, raw), c)
        return acc

    theta = None
    if base.is_conway:
        cand = np.asarray([(q + 1) % ext.order], dtype=np.int64)
        if eval_modulus(cand)[0] == ext.zero_log:
            theta = int(cand[0])
    if theta is None:
        allraw = np.arange(ext.order, dtype=np.int64)
        roots = allraw[eval_modulus(allraw) == ext.zero_log]
        if len(roots) == 0:
            raise InvariantViolation("base modulus has no root in the quadratic extension")
        theta = int(roots[0])
    # image of the base generator: sum c_i theta^i over its coefficient vector
    image = ext.zero_log
    for i, c in enumerate(base.coeffs(base.r)):
        image = ext.radd(image, ext.rmul(ext.rint(c), (theta * i) % ext.order))
    if image == ext.zero_log or ext.order // math.gcd(ext.order, image) != base.order:
        raise InvariantViolation("embedded generator has the wrong order")
    embed_raw = [(n * image) % ext.order for n in range(base.order)]
    return QuadraticExtension(base, ext, embed_raw)


def relative_trace(z: FieldElement, extension: QuadraticExtension) -> FieldElement:
    """Tr(z) = z + z^q, expressed in the base field."""
    return extension.restrict(z + extension.frobenius(z))


def iter_raw(field: GaloisField) -> Iterable[int]:
    """All raw values, zero first."""
    yield field.zero_log
    yield from range(field.order)
