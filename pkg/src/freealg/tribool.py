"""Kleene three-valued truth."""
from __future__ import annotations

import enum


class TriBool(enum.Enum):
    FALSE = 0
    UNKNOWN = 1
    TRUE = 2

    @classmethod
    def of(cls, b: bool) -> "TriBool":
        return cls.TRUE if b else cls.FALSE

    def __and__(self, other: "TriBool") -> "TriBool":
        return TriBool(min(self.value, other.value))

    def __or__(self, other: "TriBool") -> "TriBool":
        return TriBool(max(self.value, other.value))

    def __invert__(self) -> "TriBool":
        return TriBool(2 - self.value)

    def implies(self, other: "TriBool") -> "TriBool":
        return ~self | other

    def iff(self, other: "TriBool") -> "TriBool":
        return self.implies(other) & other.implies(self)

    @property
    def definite(self) -> bool:
        return self is not TriBool.UNKNOWN

    def __bool__(self):
        raise TypeError("TriBool has no implicit truth value; compare with TriBool.TRUE")

    def __str__(self):
        return {0: "False", 1: "Unknown", 2: "True"}[self.value]


TRUE = TriBool.TRUE
FALSE = TriBool.FALSE
UNKNOWN = TriBool.UNKNOWN
