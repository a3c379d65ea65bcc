"""Finite digit words over the alphabet {0, ..., d-1}.

A ``Word`` is an immutable digit sequence together with its alphabet size
(the polynomial degree d).  Words double as itineraries of periodic points:
a point of exact period n has a primitive length-n word, and the shift map
acts by left rotation.

``KneadingSequence`` models the kneading data of a periodic angle: n-1
digits followed by the terminal boundary symbol ``*``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

from .errors import InternalInvariant, PreconditionError


@dataclass(frozen=True)
class Word:
    digits: Tuple[int, ...]
    degree: int

    def __post_init__(self):
        if self.degree < 2:
            raise PreconditionError("alphabet size must be >= 2, got %r" % (self.degree,))
        if not self.digits:
            raise PreconditionError("empty word")
        if not isinstance(self.digits, tuple):
            object.__setattr__(self, "digits", tuple(self.digits))
        for e in self.digits:
            if not (0 <= e < self.degree):
                raise PreconditionError(
                    "digit %r out of range for alphabet size %d" % (e, self.degree))

    @classmethod
    def parse(cls, text: str, degree: int) -> "Word":
        """Parse a digit string like ``"22110"``.  Digits must be single chars."""
        try:
            digits = tuple(int(ch) for ch in text)
        except ValueError:
            raise PreconditionError("cannot parse word %r" % (text,)) from None
        return cls(digits, degree)

    def __str__(self) -> str:
        return "".join(str(e) for e in self.digits)

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __iter__(self):
        return iter(self.digits)

    def concat(self, other: "Word") -> "Word":
        if other.degree != self.degree:
            raise PreconditionError("mixing alphabet sizes %d and %d"
                                    % (self.degree, other.degree))
        return Word(self.digits + other.digits, self.degree)

    def repeat(self, k: int) -> "Word":
        if k < 1:
            raise PreconditionError("repetition count must be >= 1")
        return Word(self.digits * k, self.degree)

    def rotated(self, j: int) -> "Word":
        """Left rotation by j places (the shift acting on periodic itineraries)."""
        j %= len(self.digits)
        return Word(self.digits[j:] + self.digits[:j], self.degree)

    def rotations(self) -> Iterator["Word"]:
        for j in range(len(self.digits)):
            yield self.rotated(j)

    def with_last(self, digit: int) -> "Word":
        return Word(self.digits[:-1] + (digit,), self.degree)

    def digit_sum(self) -> int:
        return sum(self.digits)

    def is_primitive(self) -> bool:
        return len(primitive_root(self)[0]) == len(self)

    def max_rotation(self) -> "Word":
        """The lexicographically largest rotation (unique when primitive)."""
        return max(self.rotations(), key=lambda w: w.digits)

    def min_rotation(self) -> "Word":
        """Canonical orbit representative."""
        return min(self.rotations(), key=lambda w: w.digits)


def primitive_root(w: Word) -> Tuple[Word, int]:
    """Write w = root^power with root primitive and power maximal.

    The root is unique (Levi); we find it from the classic border/failure
    function: the shortest period of w is len(w) - (longest proper border),
    and w is a power of its period prefix iff the period length divides len(w).
    """
    digits = w.digits
    n = len(digits)
    fail = [0] * n
    k = 0
    for i in range(1, n):
        while k > 0 and digits[i] != digits[k]:
            k = fail[k - 1]
        if digits[i] == digits[k]:
            k += 1
        fail[i] = k
    p = n - fail[n - 1]
    if n % p == 0:
        return Word(digits[:p], w.degree), n // p
    return w, 1


@dataclass(frozen=True)
class KneadingSequence:
    """Digits nu_1 ... nu_{n-1} followed by the boundary symbol ``*``."""

    body: Tuple[int, ...]
    degree: int

    def __post_init__(self):
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))
        for e in self.body:
            if not (0 <= e < self.degree):
                raise PreconditionError(
                    "kneading digit %r out of range for alphabet size %d"
                    % (e, self.degree))

    @property
    def period(self) -> int:
        return len(self.body) + 1

    def __str__(self) -> str:
        return "".join(str(e) for e in self.body) + "*"

    @classmethod
    def parse(cls, text: str, degree: int) -> "KneadingSequence":
        if not text.endswith("*"):
            raise PreconditionError("kneading sequence must end with '*': %r" % (text,))
        body = tuple(int(ch) for ch in text[:-1])
        return cls(body, degree)


@dataclass(frozen=True)
class CyclicExpression:
    """A kneading sequence written as w^{s-1} w_star with w primitive."""

    w: Word
    s: int

    def __post_init__(self):
        if self.s < 2:
            raise PreconditionError("repetition count s must be >= 2")

    @property
    def t(self) -> int:
        return len(self.w)

    @property
    def period(self) -> int:
        return self.t * self.s

    def __str__(self) -> str:
        return "(%s)^%d*" % (self.w, self.s)


def cyclic_expression(nu: KneadingSequence) -> Optional[CyclicExpression]:
    """The unique (w, s) with nu = w^{s-1} w_star, if one exists.

    Scans proper divisors t of the period; a candidate works when the body
    is t-periodic and the prefix w of length t is primitive.  At most one
    divisor can succeed; we verify that rather than assume it.
    """
    n = nu.period
    found = None
    for t in range(1, n):
        if n % t != 0:
            continue
        w = Word(nu.body[:t], nu.degree)
        if any(nu.body[i] != nu.body[i % t] for i in range(n - 1)):
            continue
        if not w.is_primitive():
            continue
        if found is not None:
            raise InternalInvariant(
                "two cyclic expressions for %s: %s and (%s)^%d"
                % (nu, found, w, n // t))
        found = CyclicExpression(w, n // t)
    return found
