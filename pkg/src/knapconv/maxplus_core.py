"""Extended-integer scalars and the quadratic (max,+) / (min,+) oracles.

Vectors are plain Python sequences.  Finite entries are ``int`` and the two
infinities are the float sentinels :data:`NEG_INF` and :data:`POS_INF`, which
compare correctly against arbitrary ints.  Every fast kernel in the package is
tested against :func:`naive_conv`.
"""

from __future__ import annotations

from itertools import islice
from operator import add
from typing import Sequence

NEG_INF = float("-inf")
POS_INF = float("inf")

INT64_MAX = (1 << 63) - 1
INT64_MIN = -(1 << 63)


class DomainError(ValueError):
    """An input lies outside the domain an operation is defined on."""


class MaxPlusOverflowError(OverflowError):
    """A finite result left the signed 64-bit range."""


def is_finite(x) -> bool:
    return x != NEG_INF and x != POS_INF


def check_range64(v: list) -> list:
    """Raise unless every finite entry of ``v`` fits in 64 bits; return ``v``."""
    fin = [x for x in v if type(x) is int]
    if fin and (max(fin) > INT64_MAX or min(fin) < INT64_MIN):
        raise MaxPlusOverflowError("result leaves the signed 64-bit range")
    return v


def check_int64(x: int) -> int:
    if x > INT64_MAX or x < INT64_MIN:
        raise MaxPlusOverflowError(f"value {x} exceeds the signed 64-bit range")
    return x


def ext_add(x, y):
    """Add two extended integers with the usual infinity rules."""
    if x == NEG_INF:
        if y == POS_INF:
            raise DomainError("+inf + -inf is undefined")
        return NEG_INF
    if y == NEG_INF:
        if x == POS_INF:
            raise DomainError("+inf + -inf is undefined")
        return NEG_INF
    if x == POS_INF or y == POS_INF:
        return POS_INF
    return check_int64(x + y)


def parse_ext(token: str):
    """Parse ``-inf``/``+inf``/``inf`` or a decimal integer."""
    t = token.strip().lower()
    if t in ("-inf", "-∞"):
        return NEG_INF
    if t in ("inf", "+inf", "∞", "+∞"):
        return POS_INF
    return check_int64(int(t))


def format_ext(x) -> str:
    if x == NEG_INF:
        return "-inf"
    if x == POS_INF:
        return "+inf"
    return str(int(x))


def as_vector(a: Sequence, name: str = "vector") -> list:
    """Copy ``a`` into a list, normalising entries and rejecting empties."""
    out = list(a)
    if out and all(type(x) is int for x in out):
        if max(out) > INT64_MAX or min(out) < INT64_MIN:
            raise MaxPlusOverflowError(f"{name} has a value outside the signed 64-bit range")
        return out
    a, out = out, []
    for x in a:
        if isinstance(x, float):
            if x == NEG_INF or x == POS_INF:
                out.append(x)
                continue
            if not x.is_integer():
                raise DomainError(f"{name} holds a non-integer value {x!r}")
            x = int(x)
        elif type(x) is not int:
            try:
                xi = int(x)
            except (TypeError, ValueError):
                raise DomainError(f"{name} holds a non-numeric value {x!r}") from None
            if xi != x:
                raise DomainError(f"{name} holds a non-integer value {x!r}")
            x = xi
        out.append(check_int64(x))
    if not out:
        raise DomainError(f"{name} must have length >= 1")
    return out


def _finite_extremes(v):
    fin = [x for x in v if is_finite(x)]
    if not fin:
        return None
    return min(fin), max(fin)


def _check_sum_range(a, b):
    ea, eb = _finite_extremes(a), _finite_extremes(b)
    if ea is None or eb is None:
        return
    if ea[1] + eb[1] > INT64_MAX or ea[0] + eb[0] < INT64_MIN:
        raise MaxPlusOverflowError("a finite cross-sum exceeds the signed 64-bit range")


def naive_conv(a: Sequence, b: Sequence) -> list:
    """Quadratic (max,+) convolution.

    A pair with a ``NEG_INF`` operand contributes ``NEG_INF``, even when its
    partner is ``POS_INF``.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    _check_sum_range(a, b)
    na, nb = len(a), len(b)
    if POS_INF in a or POS_INF in b:
        return _naive_conv_with_posinf(a, b)
    rb = b[::-1]
    out = []
    for i in range(na + nb - 1):
        lo = max(0, i - nb + 1)
        hi = min(i, na - 1)
        # b indices i-lo down to i-hi, i.e. rb[nb-1-i+lo : ...]
        start = nb - 1 - i + lo
        out.append(max(map(add, islice(a, lo, hi + 1), islice(rb, start, start + hi - lo + 1))))
    return out


def _naive_conv_with_posinf(a, b):
    out = [NEG_INF] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == NEG_INF:
            continue
        for j, y in enumerate(b):
            if y == NEG_INF:
                continue
            s = POS_INF if (x == POS_INF or y == POS_INF) else x + y
            if s > out[i + j]:
                out[i + j] = s
    return out


def negate(a: Sequence) -> list:
    return [-x for x in a]


def naive_min_conv(a: Sequence, b: Sequence) -> list:
    """(min,+) convolution by negating both operands around :func:`naive_conv`."""
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    return negate(naive_conv(negate(a), negate(b)))


def naive_power(a: Sequence, k: int) -> list:
    """The k-th (max,+) power of ``a``, by k-1 successive naive convolutions."""
    if k < 1:
        raise DomainError("k must be >= 1")
    a = as_vector(a, "a")
    out = a
    for _ in range(k - 1):
        out = naive_conv(out, a)
    return out
