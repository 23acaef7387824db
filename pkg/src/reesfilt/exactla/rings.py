from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class BaseRing:
    """One of Z, Q or F_p.

    Elements are plain Python values: ``int`` for Z, ``Fraction`` for Q and
    ``int`` in ``range(p)`` for F_p.  ``ring(x)`` coerces to canonical form.
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.p is None or not _is_prime(self.p):
                raise ValueError(f"F_p needs a prime p, got {self.p!r}")
        elif self.p is not None:
            raise ValueError("only F_p carries a characteristic")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    @property
    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def __call__(self, x):
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            if isinstance(x, str):
                return int(x)
            if isinstance(x, bool) or not isinstance(x, int):
                raise TypeError(f"cannot coerce {x!r} to Z")
            return x
        if self.kind == "Q":
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def reduce(self, x):
        """Canonical form of a value produced by ring arithmetic."""
        return x % self.p if self.kind == "Fp" else x

    def inv(self, x):
        if self.kind == "Z":
            if x in (1, -1):
                return x
            raise ZeroDivisionError(f"{x} is not a unit in Z")
        if x == 0:
            raise ZeroDivisionError("division by zero")
        if self.kind == "Q":
            return 1 / Fraction(x)
        return pow(x, -1, self.p)

    def is_unit(self, x) -> bool:
        return x in (1, -1) if self.kind == "Z" else x != 0

    def format(self, x) -> str:
        return str(x)

    @property
    def descriptor(self) -> str:
        return {"Z": "z", "Q": "q"}.get(self.kind) or f"fp:{self.p}"

    @classmethod
    def from_descriptor(cls, text: str) -> BaseRing:
        t = text.strip().lower()
        if t in ("z", "zz", "integers"):
            return ZZ
        if t in ("q", "qq", "rationals"):
            return QQ
        if t.startswith("fp:"):
            try:
                return GF(int(t[3:]))
            except ValueError as exc:
                raise ValueError(f"bad ring descriptor {text!r}: {exc}") from None
        raise ValueError(f"bad ring descriptor {text!r}; expected z, q or fp:<p>")

    def __str__(self):
        return {"Z": "Z", "Q": "Q"}.get(self.kind) or f"F_{self.p}"


ZZ = BaseRing("Z")
QQ = BaseRing("Q")


def GF(p: int) -> BaseRing:
    return BaseRing("Fp", p)
