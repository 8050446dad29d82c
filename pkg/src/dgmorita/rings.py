"""Coefficient rings: the integers, the rationals and prime fields.

Arrays over ``Z`` and ``Q`` are numpy object arrays holding Python ints and
``Fraction`` instances; arrays over ``F_p`` are ``int64`` arrays reduced into
``[0, p)``.  Every function that produces an array returns it reduced.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

import numpy as np

# products of two residues must fit in int64
MAX_PRIME = 2**31

__all__ = ["CoeffRing", "ZZ", "QQ", "GF", "is_prime"]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for q in range(3, isqrt(n) + 1, 2):
        if n % q == 0:
            return False
    return True


class CoeffRing:
    """One of ``Z``, ``Q`` or ``F_p``.

    Instances compare equal by value, so ``GF(5) == GF(5)``.
    """

    _KINDS = ("Z", "Q", "Fp")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in self._KINDS:
            raise ValueError(f"unsupported coefficient ring {kind!r}: PID/field required")
        if kind == "Fp":
            if p is None or not is_prime(int(p)):
                raise ValueError(f"F_p needs a prime modulus, got {p!r}: PID/field required")
            p = int(p)
            if p >= MAX_PRIME:
                raise ValueError(f"prime {p} too large: int64 arithmetic needs p < 2^31")
        elif p is not None:
            raise ValueError("only F_p takes a modulus")
        self.kind = kind
        self.p = p

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, CoeffRing) and (self.kind, self.p) == (other.kind, other.p)

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"CoeffRing({self})"

    def __str__(self):
        return f"F{self.p}" if self.kind == "Fp" else self.kind

    @property
    def tag(self) -> str:
        """Command-line spelling (``Z``, ``Q``, ``Fp:5``)."""
        return f"Fp:{self.p}" if self.kind == "Fp" else self.kind

    @classmethod
    def parse(cls, text: str) -> "CoeffRing":
        t = str(text).strip()
        if t in ("Z", "ZZ"):
            return cls("Z")
        if t in ("Q", "QQ"):
            return cls("Q")
        for prefix in ("Fp:", "F", "GF", "Z/"):
            if t.startswith(prefix) and t[len(prefix):].isdigit():
                n = int(t[len(prefix):])
                if prefix == "Z/" and not is_prime(n):
                    raise ValueError(f"Z/{n} is not a PID/field: PID/field required")
                return cls("Fp", n)
        raise ValueError(f"unknown coefficient ring {text!r}: PID/field required")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def dtype(self):
        return np.int64 if self.kind == "Fp" else object

    # -- scalars ----------------------------------------------------------
    def scalar(self, x):
        if self.kind == "Fp":
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        if isinstance(x, (int, np.integer)):
            return int(x)
        fx = Fraction(x)
        if fx.denominator != 1:
            raise ValueError(f"{x} is not an integer")
        return fx.numerator

    def zero(self):
        return self.scalar(0)

    def one(self):
        return self.scalar(1)

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x in (1, -1)
        return x != 0

    def inv(self, x):
        if self.kind == "Fp":
            return pow(int(x), -1, self.p)
        if self.kind == "Q":
            return 1 / Fraction(x)
        if x in (1, -1):
            return x
        raise ZeroDivisionError(f"{x} is not a unit in Z")

    def norm(self, x) -> int:
        """Euclidean size used for pivot selection."""
        if self.kind == "Z":
            return abs(int(x))
        return 0 if x == 0 else 1

    def quo(self, a, b):
        """Euclidean quotient with ``a - quo(a, b) * b`` smaller than ``b``."""
        if self.kind == "Z":
            return a // b if b > 0 else -((-a) // b)
        return self.scalar(a * self.inv(b))

    def divides(self, a, b) -> bool:
        """Whether ``a`` divides ``b``."""
        if self.kind == "Z":
            return b == 0 if a == 0 else b % a == 0
        return a != 0 or b == 0

    def canonical_associate(self, x):
        """(normalized x, unit u) with ``u * x`` normalized (``|x|`` or 1)."""
        if x == 0:
            return self.zero(), self.one()
        if self.kind == "Z":
            return (x, 1) if x > 0 else (-x, -1)
        return self.one(), self.inv(x)

    def reduce_mod(self, x, d):
        """Representative of ``x`` modulo the ideal ``(d)``."""
        if self.kind == "Z" and d not in (0,):
            return x % abs(d)
        if self.kind != "Z" and d != 0:
            return self.zero()
        return x

    def gcd(self, a, b):
        if self.kind == "Z":
            return gcd(a, b)
        return self.one() if (a != 0 or b != 0) else self.zero()

    # -- arrays -----------------------------------------------------------
    def array(self, data, shape=None) -> np.ndarray:
        a = np.array(data, dtype=object)
        if shape is not None:
            a = a.reshape(shape)
        if self.kind == "Fp":
            out = np.empty(a.shape, dtype=np.int64)
            flat = a.ravel()
            of = out.ravel()
            for i, v in enumerate(flat):
                of[i] = self.scalar(v)
            return out
        out = np.empty(a.shape, dtype=object)
        flat = a.ravel()
        of = out.reshape(-1)
        for i, v in enumerate(flat):
            of[i] = self.scalar(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        if self.kind == "Fp":
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(self.zero())
        return out

    def eye(self, n: int) -> np.ndarray:
        m = self.zeros((n, n))
        for i in range(n):
            m[i, i] = self.one()
        return m

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.kind == "Fp":
            return np.mod(a, self.p)
        return a

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[-1] == 0:
            shape = a.shape[:-1] + b.shape[1:]
            return self.zeros(shape)
        if self.kind == "Fp":
            return self._matmul_fp(a, b)
        return self.reduce(a @ b)

    def _matmul_fp(self, a, b):
        p, k = self.p, a.shape[-1]
        a, b = np.mod(a, p), np.mod(b, p)
        if (p - 1) ** 2 >= 2**52:
            if (p - 1) ** 2 * k < 2**63:
                return np.mod(a @ b, p)
            return np.mod(a.astype(object) @ b.astype(object), p).astype(np.int64)
        if a.size * b.size <= 4096:
            return np.mod(a @ b, p)
        # float64 BLAS is exact while every partial sum stays below 2^53
        af, bf = a.astype(np.float64), b.astype(np.float64)
        step = 2**52 // max(1, (p - 1) ** 2)
        out = None
        for s in range(0, k, step):
            part = np.mod(af[..., s : s + step] @ bf[s : s + step], p)
            out = part if out is None else np.mod(out + part, p)
        return out.astype(np.int64)

    def mul(self, *mats: np.ndarray) -> np.ndarray:
        out = mats[0]
        for m in mats[1:]:
            out = self.matmul(out, m)
        return out

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def scale(self, c, a):
        return self.reduce(self.scalar(c) * a)

    def neg(self, a):
        return self.reduce(-a)

    def is_zero_array(self, a) -> bool:
        if a.size == 0:
            return True
        return not np.any(a != 0)

    def equal(self, a, b) -> bool:
        return a.shape == b.shape and self.is_zero_array(self.sub(a, b))

    def random_array(self, rng, shape, bound: int = 3) -> np.ndarray:
        """Random entries; in ``F_p`` uniform, otherwise in ``[-bound, bound]``."""
        if self.kind == "Fp":
            return rng.integers(0, self.p, size=shape).astype(np.int64)
        vals = rng.integers(-bound, bound + 1, size=shape)
        return self.array(vals.tolist() if vals.ndim else int(vals), shape=shape)

    def format(self, x) -> str:
        return str(x)


def ZZ() -> CoeffRing:
    return CoeffRing("Z")


def QQ() -> CoeffRing:
    return CoeffRing("Q")


def GF(p: int) -> CoeffRing:
    return CoeffRing("Fp", p)
