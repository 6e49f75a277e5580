"""Exact classification of angles determined by integer lattice points.

The angle at ``vertex`` between rays toward ``a`` and ``b`` is encoded by the
sign of its cosine together with the reduced fraction cos^2 = num/den.  For
integer inputs this pair is a complete, canonical invariant: two vertex-pair
configurations produce equal keys iff they determine the same angle, because

    cos = (u . v) / (|u| |v|),   u = a - vertex,  v = b - vertex,

so cos^2 = (u.v)^2 / (|u|^2 |v|^2) is an exact rational and the sign of u.v
fixes the quadrant.  No floating-point equality is used anywhere.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

# Intermediates (u.v)^2 and |u|^2 |v|^2 must stay below 128 bits; inputs that
# would exceed this raise instead of silently widening.
_LIMIT_128 = 1 << 127

IntVector = Sequence[int]
Point = Sequence[int]


class AngleKey(NamedTuple):
    """Canonical angle encoding: sign of cos plus reduced cos^2 = num/den.

    Invariants: sign in {-1, 0, +1}; gcd(num, den) = 1; 0 <= num <= den;
    den >= 1; sign = 0 iff num = 0; num = den iff the angle is 0 or pi.
    """

    sign: int
    num: int
    den: int

    def cosine(self) -> float:
        return self.sign * math.sqrt(self.num / self.den)

    def __str__(self) -> str:
        return format_key(self)


RIGHT_ANGLE = AngleKey(0, 0, 1)


def squared_norm(v: IntVector) -> int:
    """Exact sum of squared coordinates."""
    total = 0
    for c in v:
        total += c * c
    if total >= _LIMIT_128:
        raise OverflowError("squared norm exceeds 128-bit intermediate limit")
    return total


def _rays(vertex: Point, a: Point, b: Point):
    u = tuple(x - z for x, z in zip(a, vertex))
    v = tuple(y - z for y, z in zip(b, vertex))
    if not any(u) or not any(v):
        raise ValueError("degenerate vertex: a and b must differ from vertex")
    return u, v


def angle_key(vertex: Point, a: Point, b: Point) -> AngleKey:
    """Exact key of the angle at ``vertex`` subtended by ``a`` and ``b``.

    ``a == b`` is allowed and yields the zero angle (+1, 1, 1); only
    coincidence with the vertex is rejected.
    """
    u, v = _rays(vertex, a, b)
    dp = sum(x * y for x, y in zip(u, v))
    num = dp * dp
    den = squared_norm(u) * squared_norm(v)
    if num >= _LIMIT_128 or den >= _LIMIT_128:
        raise OverflowError("angle key exceeds 128-bit intermediate limit")
    g = math.gcd(num, den)
    return AngleKey((dp > 0) - (dp < 0), num // g, den // g)


def is_right(vertex: Point, a: Point, b: Point) -> bool:
    """True iff the rays from vertex to a and b are exactly orthogonal."""
    u, v = _rays(vertex, a, b)
    return sum(x * y for x, y in zip(u, v)) == 0


def cosine_value(vertex: Point, a: Point, b: Point) -> float:
    """Floating cosine of the angle, accurate to about 1e-12 relative."""
    return angle_key(vertex, a, b).cosine()


def angle_radians(key: AngleKey) -> float:
    """Angle in [0, pi] represented by a key."""
    c = key.cosine()
    # clamp: sqrt rounding can nudge |cos| past 1 for num = den
    return math.acos(max(-1.0, min(1.0, c)))


_SIGN_CHAR = {-1: "-", 0: "0", 1: "+"}
_CHAR_SIGN = {v: k for k, v in _SIGN_CHAR.items()}


def format_key(key: AngleKey) -> str:
    """Serialize as ``s:num/den``, e.g. ``0:0/1`` or ``+:1/2``."""
    return f"{_SIGN_CHAR[key.sign]}:{key.num}/{key.den}"


def parse_key(text: str) -> AngleKey:
    """Inverse of :func:`format_key`."""
    try:
        sign_part, frac = text.split(":")
        num_s, den_s = frac.split("/")
        key = AngleKey(_CHAR_SIGN[sign_part], int(num_s), int(den_s))
    except (ValueError, KeyError) as exc:
        raise ValueError(f"malformed angle key {text!r}") from exc
    _validate(key)
    return key


def _validate(key: AngleKey) -> None:
    if key.sign not in (-1, 0, 1):
        raise ValueError(f"bad sign in {key}")
    if key.den < 1 or not 0 <= key.num <= key.den:
        raise ValueError(f"bad fraction in {key}")
    if math.gcd(key.num, key.den) != 1:
        raise ValueError(f"unreduced fraction in {key}")
    if (key.sign == 0) != (key.num == 0):
        raise ValueError(f"sign/zero mismatch in {key}")
