"""Prime-order elliptic-curve group with instrumented operation counters.

The one concrete backend is the prime-order subgroup of Ed25519 (twisted
Edwards curve -x^2 + y^2 = 1 + d*x^2*y^2 over GF(2^255 - 19), ~128-bit
security).  Points are kept in extended coordinates (X, Y, Z, T) with
T = X*Y/Z, where the unified addition law is complete: it is correct for
doubling and for identity operands alike.

Two layers of API:

* ``GroupElement`` / ``Scalar`` support plain operators (``P + Q``,
  ``k * P``) for oracles, tests, and internal use.  These are never
  counted.
* :func:`scalar_mult` and :func:`point_add` are the instrumented entry
  points used by the protocol layers; they tick an :class:`OpCounter` so
  that per-operation group-op budgets can be asserted exactly.

Elements decode from/encode to the canonical 32-byte little-endian form
(y with the sign of x in the top bit).  Decoding rejects non-canonical
bytes, off-curve points, and points outside the prime-order subgroup, so
every live ``GroupElement`` behaves as a member of a group of prime
order ``N``.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import MalformedElement, MalformedScalar

__all__ = [
    "P",
    "N",
    "ELEMENT_LEN",
    "SCALAR_LEN",
    "GROUP_ID",
    "DOMAIN_KEY",
    "DOMAIN_SIG",
    "Scalar",
    "GroupElement",
    "GroupDescriptor",
    "OpCounter",
    "G",
    "IDENTITY",
    "DESCRIPTOR",
    "scalar_mult",
    "point_add",
    "hash_to_scalar",
    "random_scalar",
    "encode_element",
    "decode_element",
]

# Field prime, curve constant, and prime subgroup order for Ed25519.
P = 2**255 - 19
_D = (-121665 * pow(121666, P - 2, P)) % P
_2D = 2 * _D % P
N = 2**252 + 27742317777372353535851937790883648493
_SQRT_M1 = pow(2, (P - 1) // 4, P)

ELEMENT_LEN = 32
SCALAR_LEN = 32
GROUP_ID = 0x01

# Domain-separation tags for hash_to_scalar.
DOMAIN_KEY = 0x01  # identity-record hashing during key issuance / reconstruction
DOMAIN_SIG = 0x02  # signature challenge hashing


# ---------------------------------------------------------------------------
# Raw extended-coordinate arithmetic (uncounted; tuples for speed)
# ---------------------------------------------------------------------------

_IDENT_COORDS = (0, 1, 1, 0)


def _add_raw(p1, p2):
    x1, y1, z1, t1 = p1
    x2, y2, z2, t2 = p2
    a = (y1 - x1) * (y2 - x2) % P
    b = (y1 + x1) * (y2 + x2) % P
    c = t1 * t2 % P * _2D % P
    d = 2 * z1 * z2 % P
    e = b - a
    f = d - c
    g = d + c
    h = b + a
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def _dbl_raw(p1):
    x1, y1, z1, t1 = p1
    a = x1 * x1 % P
    b = y1 * y1 % P
    c = 2 * z1 * z1 % P
    e = ((x1 + y1) * (x1 + y1) - a - b) % P
    g = (b - a) % P
    f = (g - c) % P
    h = (-b - a) % P
    return (e * f % P, g * h % P, f * g % P, e * h % P)


def _mul_raw(coords, k, window):
    # Fixed 4-bit window, most-significant nibble first.  k is used as
    # given (no mod-N reduction) so the subgroup membership test N*P can
    # be expressed through it.
    if k == 0:
        return _IDENT_COORDS
    nibbles = []
    while k:
        nibbles.append(k & 15)
        k >>= 4
    acc = None
    dbl = _dbl_raw
    add = _add_raw
    for nib in reversed(nibbles):
        if acc is not None:
            acc = dbl(dbl(dbl(dbl(acc))))
        if nib:
            acc = window[nib - 1] if acc is None else add(acc, window[nib - 1])
    return acc if acc is not None else _IDENT_COORDS


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


class Scalar:
    """Residue modulo the group order ``N``, always kept canonical."""

    __slots__ = ("v",)

    def __init__(self, value: int):
        self.v = value % N

    @property
    def value(self) -> int:
        """The canonical integer representative in [0, N)."""
        return self.v

    def __add__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.v + other.v)

    def __sub__(self, other: "Scalar") -> "Scalar":
        return Scalar(self.v - other.v)

    def __mul__(self, other):
        if isinstance(other, Scalar):
            return Scalar(self.v * other.v)
        if isinstance(other, GroupElement):
            return other.__rmul__(self)
        return NotImplemented

    def __neg__(self) -> "Scalar":
        return Scalar(-self.v)

    def __eq__(self, other) -> bool:
        return isinstance(other, Scalar) and self.v == other.v

    def __hash__(self) -> int:
        return hash(("Scalar", self.v))

    def __repr__(self) -> str:
        return f"Scalar({hex(self.v)})"

    def is_zero(self) -> bool:
        return self.v == 0

    def encode(self) -> bytes:
        """Canonical 32-byte little-endian encoding."""
        return self.v.to_bytes(SCALAR_LEN, "little")


def decode_scalar(data: bytes) -> Scalar:
    """Decode a canonical 32-byte little-endian scalar; reject values >= N."""
    if len(data) != SCALAR_LEN:
        raise MalformedScalar(f"scalar must be {SCALAR_LEN} bytes, got {len(data)}")
    v = int.from_bytes(data, "little")
    if v >= N:
        raise MalformedScalar("scalar not reduced modulo the group order")
    return Scalar(v)


# ---------------------------------------------------------------------------
# Group elements
# ---------------------------------------------------------------------------


class GroupElement:
    """Point in the prime-order subgroup, in extended twisted Edwards coordinates.

    Immutable in value; a per-element window table for scalar
    multiplication is cached lazily (idempotent, so safe to share across
    readers).
    """

    __slots__ = ("coords", "_window")

    def __init__(self, coords):
        self.coords = coords
        self._window = None

    def _win(self):
        win = self._window
        if win is None:
            win = [self.coords]
            cur = self.coords
            for _ in range(14):
                cur = _add_raw(cur, self.coords)
                win.append(cur)
            self._window = win
        return win

    def __add__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(_add_raw(self.coords, other.coords))

    def __neg__(self) -> "GroupElement":
        x, y, z, t = self.coords
        return GroupElement(((-x) % P, y, z, (-t) % P))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k) -> "GroupElement":
        if isinstance(k, Scalar):
            k = k.v
        if not isinstance(k, int):
            return NotImplemented
        k %= N
        if k == 0:
            return IDENTITY
        return GroupElement(_mul_raw(self.coords, k, self._win()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        x1, y1, z1, _ = self.coords
        x2, y2, z2, _ = other.coords
        return (x1 * z2 - x2 * z1) % P == 0 and (y1 * z2 - y2 * z1) % P == 0

    def __hash__(self) -> int:
        return hash(("GroupElement", self.encode()))

    def __repr__(self) -> str:
        return f"GroupElement({self.encode().hex()})"

    def is_identity(self) -> bool:
        x, y, z, _ = self.coords
        return x % P == 0 and (y - z) % P == 0

    def encode(self) -> bytes:
        """Canonical 32-byte encoding: little-endian y, sign of x in bit 255."""
        x, y, z, _ = self.coords
        zi = pow(z, P - 2, P)
        xa = x * zi % P
        ya = y * zi % P
        return (ya | ((xa & 1) << 255)).to_bytes(ELEMENT_LEN, "little")


def encode_element(point: GroupElement) -> bytes:
    return point.encode()


def decode_element(data: bytes) -> GroupElement:
    """Decode 32 bytes into a group element.

    Rejects wrong lengths, non-canonical y (>= field prime), sign bit set
    on x = 0, y with no matching x on the curve, and points that are not
    in the prime-order subgroup (N * P != identity).
    """
    if len(data) != ELEMENT_LEN:
        raise MalformedElement(f"element must be {ELEMENT_LEN} bytes, got {len(data)}")
    val = int.from_bytes(data, "little")
    sign = val >> 255
    y = val & ((1 << 255) - 1)
    if y >= P:
        raise MalformedElement("non-canonical y coordinate")
    # x^2 = (y^2 - 1) / (d*y^2 + 1); candidate root via x = u*v^3 * (u*v^7)^((P-5)/8)
    y2 = y * y % P
    u = (y2 - 1) % P
    v = (_D * y2 + 1) % P
    x = u * pow(v, 3, P) % P * pow(u * pow(v, 7, P) % P, (P - 5) // 8, P) % P
    vx2 = v * x * x % P
    if vx2 == u:
        pass
    elif vx2 == (P - u) % P:
        x = x * _SQRT_M1 % P
    else:
        raise MalformedElement("not a curve point")
    if x == 0 and sign:
        raise MalformedElement("non-canonical sign bit")
    if x & 1 != sign:
        x = P - x
    point = GroupElement((x, y, 1, x * y % P))
    if not GroupElement(_mul_raw(point.coords, N, point._win())).is_identity():
        raise MalformedElement("point outside the prime-order subgroup")
    return point


def _base_point() -> GroupElement:
    y = 4 * pow(5, P - 2, P) % P
    y2 = y * y % P
    u = (y2 - 1) % P
    v = (_D * y2 + 1) % P
    x = u * pow(v, 3, P) % P * pow(u * pow(v, 7, P) % P, (P - 5) // 8, P) % P
    if (v * x * x - u) % P:
        x = x * _SQRT_M1 % P
    if x % 2:  # the standard base point has even x
        x = P - x
    return GroupElement((x, y, 1, x * y % P))


IDENTITY = GroupElement(_IDENT_COORDS)
G = _base_point()


@dataclass(frozen=True)
class GroupDescriptor:
    """Static description of the backend group."""

    group_id: int
    order: int
    generator: GroupElement
    element_len: int = ELEMENT_LEN
    scalar_len: int = SCALAR_LEN


DESCRIPTOR = GroupDescriptor(group_id=GROUP_ID, order=N, generator=G)


# ---------------------------------------------------------------------------
# Instrumented operations
# ---------------------------------------------------------------------------


@dataclass
class OpCounter:
    """Counts curve operations within one measurement scope.

    Not meant to be shared across concurrent measurements; reset only at
    scope boundaries.
    """

    scalar_mults: int = 0
    point_adds: int = 0

    def reset(self) -> None:
        self.scalar_mults = 0
        self.point_adds = 0


def scalar_mult(k: Scalar, point: GroupElement, ctr: OpCounter | None = None) -> GroupElement:
    """Return k * point, counting one scalar multiplication."""
    if ctr is not None:
        ctr.scalar_mults += 1
    return k * point


def point_add(a: GroupElement, b: GroupElement, ctr: OpCounter | None = None) -> GroupElement:
    """Return a + b, counting one point addition."""
    if ctr is not None:
        ctr.point_adds += 1
    return a + b


# ---------------------------------------------------------------------------
# Hashing and randomness
# ---------------------------------------------------------------------------


def hash_to_scalar(domain_tag: int, parts: list[bytes] | tuple[bytes, ...]) -> Scalar:
    """Hash length-prefixed byte strings into a scalar.

    A 512-bit digest is reduced modulo N, keeping the output's statistical
    distance from uniform negligible.  Each part is prefixed with its
    4-byte little-endian length, so distinct part lists never collide via
    concatenation ambiguity.
    """
    if not parts:
        raise ValueError("hash_to_scalar needs at least one part")
    h = hashlib.sha512(bytes([domain_tag]))
    for part in parts:
        h.update(len(part).to_bytes(4, "little"))
        h.update(part)
    return Scalar(int.from_bytes(h.digest(), "little"))


def random_scalar(rng) -> Scalar:
    """Uniform scalar in [1, N-1] from the supplied randomness source.

    ``rng`` is any object with ``randrange`` (``random.SystemRandom()``
    for production use, a seeded ``random.Random`` for reproducible
    tests).
    """
    return Scalar(rng.randrange(1, N))
