"""(max,+) convolution of value-bounded vectors through one big-integer product.

Each finite entry ``v`` becomes the monomial ``B**v``; multiplying the
polynomials sums ``B**(a_j + b_k)`` over every pair, and because at most
``min(|a|, |b|) < B`` terms meet in one coefficient, the top base-``B`` digit
of the coefficient is the maximum exponent.

The polynomial product is done by Kronecker substitution: coefficients are laid
out in fixed-width bit slots of a single integer, so the whole convolution is
one multiplication.  With ``gmpy2`` available that multiply is GMP's FFT and
the kernel runs in near-linear time.  ``B`` is taken as the smallest power of
two above ``|a| + |b|``, which makes both encoding (set one bit) and decoding
(bit length) exact integer operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .maxplus_core import (
    INT64_MAX,
    NEG_INF,
    POS_INF,
    DomainError,
    MaxPlusOverflowError,
    as_vector,
)

try:  # pragma: no cover - exercised implicitly
    import gmpy2

    _HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    gmpy2 = None
    _HAVE_GMPY2 = False

BACKENDS = ("gmpy2", "python", "schoolbook")

# Below this many output slots the pure-Python packer beats numpy.
_SMALL = 192
# Operands longer than this many bytes are multiplied by GMP even when packed in Python.
_GMP_BYTES = 2048

_BYTE_BITLEN = np.array([int(i).bit_length() for i in range(256)], dtype=np.int64)


def default_backend() -> str:
    return "gmpy2" if _HAVE_GMPY2 else "python"


def _base_bits(a_len: int, b_len: int) -> int:
    """log2 of the packing base: smallest power of two strictly above |a|+|b|."""
    return (a_len + b_len).bit_length()


def _check_range(v, e_max, name):
    for x in v:
        if x == NEG_INF or x == POS_INF:
            continue
        if x < 0 or x > e_max:
            raise DomainError(f"{name} has finite value {x} outside [0, {e_max}]")


def _exponents(v) -> list:
    """Finite values as exponents, -1 where the entry is -inf or +inf."""
    return [x if (x != NEG_INF and x != POS_INF) else -1 for x in v]


def _slot_bytes(k: int, e_max: int) -> int:
    # a coefficient is < B**(2e_max+1); round the slot up to whole bytes
    return (k * (2 * e_max + 1) + 7) // 8


def _pack_small(exps, k, wbits) -> int:
    acc = 0
    for i, x in enumerate(exps):
        if x >= 0:
            acc |= 1 << (k * x + wbits * i)
    return acc


def _pack_numpy(exps, k, wbytes) -> bytes:
    e = np.asarray(exps, dtype=np.int64)
    buf = np.zeros(len(e) * wbytes, dtype=np.uint8)
    idx = np.flatnonzero(e >= 0)
    pos = k * e[idx] + 8 * wbytes * idx
    buf[pos >> 3] = (np.left_shift(1, pos & 7)).astype(np.uint8)
    return buf.tobytes()


def _top_digits_small(prod: int, count: int, k: int, wbytes: int) -> list:
    raw = prod.to_bytes(count * wbytes, "little")
    out = []
    for i in range(count):
        bl = int.from_bytes(raw[i * wbytes:(i + 1) * wbytes], "little").bit_length()
        out.append((bl - 1) // k if bl else NEG_INF)
    return out


def _top_digits_numpy(raw: bytes, count: int, k: int, wbytes: int) -> list:
    arr = np.frombuffer(raw, dtype=np.uint8)
    need = count * wbytes
    if arr.size < need:
        arr = np.concatenate([arr, np.zeros(need - arr.size, dtype=np.uint8)])
    rows = arr[:need].reshape(count, wbytes)
    nz = rows != 0
    any_nz = nz.any(axis=1)
    last = wbytes - 1 - np.argmax(nz[:, ::-1], axis=1)
    top = rows[np.arange(count), last]
    bitlen = 8 * last + _BYTE_BITLEN[top]
    digits = (bitlen - 1) // k
    res = digits.tolist()
    if not any_nz.all():
        for i in np.flatnonzero(~any_nz).tolist():
            res[i] = NEG_INF
    return res


def _schoolbook_product(ea, eb, base) -> list:
    """Coefficients of the packed-polynomial product, computed term by term."""
    A = [base ** x if x >= 0 else 0 for x in ea]
    Bv = [base ** x if x >= 0 else 0 for x in eb]
    out = [0] * (len(A) + len(Bv) - 1)
    for i, x in enumerate(A):
        if not x:
            continue
        for j, y in enumerate(Bv):
            if y:
                out[i + j] += x * y
    return out


def packed_product(a: Sequence, b: Sequence, e_max: int) -> tuple[list, int]:
    """Return ``(coefficients, base)`` of the packed product, for inspection.

    Quadratic; intended for tests of the encoding.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    _check_range(a, e_max, "a")
    _check_range(b, e_max, "b")
    base = 1 << _base_bits(len(a), len(b))
    return _schoolbook_product(_exponents(a), _exponents(b), base), base


def _finite_part(ea, eb, e_max, backend) -> list:
    k = _base_bits(len(ea), len(eb))
    count = len(ea) + len(eb) - 1
    if backend == "schoolbook":
        coeffs = _schoolbook_product(ea, eb, 1 << k)
        return [(c.bit_length() - 1) // k if c else NEG_INF for c in coeffs]
    wbytes = _slot_bytes(k, e_max)
    if count <= _SMALL:
        pa = _pack_small(ea, k, 8 * wbytes)
        pb = _pack_small(eb, k, 8 * wbytes)
        if backend == "gmpy2" and count * wbytes > _GMP_BYTES:
            prod = int(gmpy2.mpz(pa) * gmpy2.mpz(pb))
        else:
            prod = pa * pb  # short operands: the native multiply beats conversion
        return _top_digits_small(prod, count, k, wbytes)
    ra = _pack_numpy(ea, k, wbytes)
    rb = _pack_numpy(eb, k, wbytes)
    if backend == "gmpy2":
        ma = gmpy2.mpz(int.from_bytes(ra, "little"))
        mb = gmpy2.mpz(int.from_bytes(rb, "little"))
        prod = ma * mb
        raw = gmpy2.to_binary(prod)[2:] if prod else b""
    else:
        prod = int.from_bytes(ra, "little") * int.from_bytes(rb, "little")
        raw = prod.to_bytes((prod.bit_length() + 7) // 8, "little")
    return _top_digits_numpy(raw, count, k, wbytes)


def bounded_range_conv(a: Sequence, b: Sequence, e_max: int, backend: str | None = None) -> list:
    """Exact (max,+) convolution of vectors whose finite entries lie in [0, e_max].

    ``-inf`` and ``+inf`` entries are allowed.  ``backend`` picks the integer
    multiplier: ``"gmpy2"`` (default when installed), ``"python"`` or the
    quadratic ``"schoolbook"`` reference.
    """
    if e_max < 0:
        raise DomainError("e_max must be non-negative")
    backend = backend or default_backend()
    if backend not in BACKENDS:
        raise DomainError(f"unknown backend {backend!r}")
    if backend == "gmpy2" and not _HAVE_GMPY2:
        raise DomainError("gmpy2 backend requested but gmpy2 is not installed")
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    _check_range(a, e_max, "a")
    _check_range(b, e_max, "b")
    return _bounded_unchecked(a, b, e_max, backend)


def _bounded_unchecked(a: list, b: list, e_max: int, backend: str | None = None) -> list:
    backend = backend or default_backend()
    out = _finite_part(_exponents(a), _exponents(b), e_max, backend)
    if POS_INF in a or POS_INF in b:
        # +inf wherever a +inf meets a partner that is not -inf
        pa = [0 if x == POS_INF else -1 for x in a]
        pb = [0 if x == POS_INF else -1 for x in b]
        fa = [0 if x != NEG_INF else -1 for x in a]
        fb = [0 if x != NEG_INF else -1 for x in b]
        left = _finite_part(pa, fb, 0, backend)
        right = _finite_part(fa, pb, 0, backend)
        for i, (x, y) in enumerate(zip(left, right)):
            if x != NEG_INF or y != NEG_INF:
                out[i] = POS_INF
    return out


@dataclass(frozen=True)
class ScaledVec:
    """Rational vector ``numerators[i] / denominator`` with one shared denominator."""

    numerators: tuple
    denominator: int = 1

    def __post_init__(self):
        if self.denominator < 1:
            raise DomainError("denominator must be >= 1")
        object.__setattr__(self, "numerators", tuple(self.numerators))
        if not self.numerators:
            raise DomainError("ScaledVec must have length >= 1")

    @classmethod
    def from_fractions(cls, values: Sequence) -> "ScaledVec":
        """Build from Fractions/ints (infinities allowed) using the lcm denominator."""
        from math import lcm

        den = 1
        for v in values:
            if v != NEG_INF and v != POS_INF:
                den = lcm(den, Fraction(v).denominator)
        nums = []
        for v in values:
            if v == NEG_INF or v == POS_INF:
                nums.append(v)
            else:
                f = Fraction(v) * den
                nums.append(f.numerator)
        return cls(tuple(nums), den)

    def values(self) -> list:
        return [x if x in (NEG_INF, POS_INF) else Fraction(x, self.denominator) for x in self.numerators]

    def __len__(self):
        return len(self.numerators)


def _double_floor(v: ScaledVec, e_max: int, name: str) -> list:
    out = []
    d = v.denominator
    for x in v.numerators:
        if x == NEG_INF or x == POS_INF:
            out.append(x)
            continue
        if x < 0 or x > e_max * d:
            raise DomainError(f"{name} has value {Fraction(x, d)} outside [0, {e_max}]")
        if 2 * x > INT64_MAX:
            raise MaxPlusOverflowError("2 * numerator overflows 64 bits")
        out.append((2 * x) // d)
    return out


def approx_conv(a: ScaledVec, b: ScaledVec, e_max: int, backend: str | None = None) -> ScaledVec:
    """Convolution of rational vectors to within an additive error below one.

    Returns ``c`` with denominator 2 and ``(a*b)_i - 1 < c_i <= (a*b)_i``.
    """
    fa = _double_floor(a, e_max, "a")
    fb = _double_floor(b, e_max, "b")
    return ScaledVec(tuple(bounded_range_conv(fa, fb, 2 * e_max, backend)), 2)
