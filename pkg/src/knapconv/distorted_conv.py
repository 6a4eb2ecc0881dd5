"""Exact convolution of vectors with small additive distortion.

If every cross-sum ``a_i + b_j`` is within ``e`` of ``(a*b)_{i+j}``, an affine
change of variables (a constant shift plus a linear ramp ``i*r``, which the
convolution carries through unchanged) squeezes both vectors into ``[0, 6e]``.
The bounded kernel then finishes the job.  The ramp slope is rational, so all
transformed values are kept scaled by ``n - 1`` and floors/ceilings are integer
divisions.
"""

from __future__ import annotations

from typing import Sequence

from .bounded_conv import _bounded_unchecked
from .maxplus_core import NEG_INF, DomainError, as_vector, check_int64, check_range64, is_finite, naive_conv


class DistortionError(DomainError):
    """The inputs are more distorted than the declared bound allows."""


def check_distortion(a: Sequence, b: Sequence, e_max: int) -> bool:
    """Quadratic check of ``(a*b)_{i+j} - a_i - b_j <= e_max`` for all pairs."""
    c = naive_conv(a, b)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            if c[i + j] - x - y > e_max:
                return False
    return True


def _direct_zero_distortion(a, b):
    # every pair is optimal: walk along the first row, then the last column
    n_a = len(a)
    out = [a[0] + y for y in b]
    out.extend(a[i] + b[-1] for i in range(1, n_a))
    return out


def distorted_square_conv(a: Sequence, b: Sequence, e_max: int, strict: bool = True,
                          backend: str | None = None) -> list:
    """Exact ``a*b`` for equal-length finite vectors with distortion at most ``e_max``.

    With ``strict`` (the default) the transformed vectors are checked to lie in
    the ranges the distortion bound guarantees and :class:`DistortionError` is
    raised otherwise.  With ``strict=False`` an out-of-range transform is
    handled by widening the value range instead: the answer stays exact, only
    slower.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    if len(b) != len(a):
        raise DomainError("distorted_square_conv needs |a| == |b|")
    if not all(is_finite(x) for x in a) or not all(is_finite(x) for x in b):
        raise DomainError("distorted inputs must be finite")
    return _square(a, b, e_max, strict, backend)


def _square(a: list, b: list, e_max: int, strict: bool, backend) -> list:
    n = len(a)
    if n == 1:
        return [check_int64(a[0] + b[0])]
    if e_max == 0 and strict:
        return check_range64(_direct_zero_distortion(a, b))

    d = n - 1
    a0, al, bl = a[0], a[-1], b[-1]
    slope = a0 - al  # the ramp is i * slope / d
    # numerators of a', b' over denominator d
    na = [(x + 3 * e_max - a0) * d + i * slope for i, x in enumerate(a)]
    nb = [(y + 3 * e_max + al - a0 - bl) * d + i * slope for i, y in enumerate(b)]

    ok = (min(na) >= e_max * d and max(na) <= 5 * e_max * d
          and min(nb) >= 0 and max(nb) <= 6 * e_max * d)
    if not ok and strict:
        raise DistortionError("transformed values leave [e, 5e] x [0, 6e]; distortion bound violated")

    # floor(2 * a'), fused with the scaling
    fa = [(2 * x) // d for x in na]
    fb = [(2 * y) // d for y in nb]
    # A common shift passes straight through the convolution, so pack only the
    # span actually used.  Under the distortion bound that span is <= 12e.
    lo = min(min(fa), min(fb))
    fa = [x - lo for x in fa]
    fb = [y - lo for y in fb]
    shift = 2 * lo
    bound = max(max(fa), max(fb))
    conv2 = _bounded_unchecked(fa, fb, bound, backend)

    # c_i = ceil(conv2_i/2 - K - i*slope/d) with K = 6e + a_{n-1} - 2a_0 - b_{n-1}
    K = 6 * e_max + al - 2 * a0 - bl
    base = shift * d - 2 * K * d
    d2 = 2 * d
    out = [-((2 * i * slope - base - v * d) // d2) for i, v in enumerate(conv2)]
    return check_range64(out)


def distorted_conv(a: Sequence, b: Sequence, e_max: int, strict: bool = True,
                   backend: str | None = None) -> list:
    """Exact ``a*b`` for finite vectors of any lengths with distortion at most ``e_max``.

    The longer vector is cut into blocks as long as the shorter one (the last
    block right-aligned, overlapping its neighbour), each block is handled by
    :func:`distorted_square_conv` and the pieces are max-merged.
    """
    a = as_vector(a, "a")
    b = as_vector(b, "b")
    if not all(is_finite(x) for x in a) or not all(is_finite(x) for x in b):
        raise DomainError("distorted inputs must be finite")
    return _blocked(a, b, e_max, strict, backend)


def _blocked(a: list, b: list, e_max: int, strict: bool, backend) -> list:
    if len(a) > len(b):
        a, b = b, a
    na, nb = len(a), len(b)
    if na == 1:
        x = a[0]
        return check_range64([x + y for y in b])
    out = [NEG_INF] * (na + nb - 1)
    blocks = -(-nb // na)
    for i in range(blocks):
        x = min(i * na, nb - na)
        piece = _square(a, b[x:x + na], e_max, strict, backend)
        for j, v in enumerate(piece, start=x):
            if v > out[j]:
                out[j] = v
    return out
