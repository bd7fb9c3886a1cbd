"""
Concrete syntax for atoms.

    atom  := ("qinc" | "rinc") "(" vars ";" vars ";" bound ")"
           | "inc" "(" vars ";" vars ")"
    vars  := name ("," name)*
    bound := digits                      (qinc)
           | digits | digits "/" digits  (rinc)

`inc(x; y)` is the plain inclusion atom, read as `qinc(x; y; 0)`. The keyword,
not the shape of the bound, decides the kind, so qinc(...; 1) and rinc(...; 1)
differ.
"""

import re
from fractions import Fraction
from typing import List

from schema.errors import AtomSyntaxError
from schema.models import RESERVED_CHARS, Atom, format_atom, qinc, rinc

_NAME = re.compile(r"[^\s" + re.escape("".join(sorted(RESERVED_CHARS))) + r"]+")
_DIGITS = re.compile(r"\d+")
_KEYWORDS = ("qinc", "rinc", "inc")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def error(self, expected: str) -> AtomSyntaxError:
        return AtomSyntaxError(self.text, self.pos, expected)

    def expect(self, char: str) -> None:
        self.skip()
        if not self.text.startswith(char, self.pos):
            raise self.error(repr(char))
        self.pos += 1

    def match(self, pattern: re.Pattern, expected: str) -> str:
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            raise self.error(expected)
        self.pos = m.end()
        return m.group()

    def names(self) -> List[str]:
        out = [self.match(_NAME, "a variable name")]
        while True:
            self.skip()
            if not self.text.startswith(",", self.pos):
                return out
            self.pos += 1
            out.append(self.match(_NAME, "a variable name"))

    def end(self) -> None:
        self.skip()
        if self.pos != len(self.text):
            raise self.error("end of input")


def parse_atom(text: str) -> Atom:
    """Parse and validate one atom; rational bounds come back in lowest terms."""
    s = _Scanner(text)
    keyword = s.match(re.compile(r"[a-z]+"), "qinc, rinc or inc")
    if keyword not in _KEYWORDS:
        s.pos -= len(keyword)
        raise s.error("qinc, rinc or inc")

    s.expect("(")
    lhs = s.names()
    s.expect(";")
    rhs = s.names()

    if keyword == "inc":
        s.expect(")")
        s.end()
        return qinc(lhs, rhs, 0)

    s.expect(";")
    numerator = int(s.match(_DIGITS, "a natural number"))
    if keyword == "qinc":
        s.expect(")")
        s.end()
        return qinc(lhs, rhs, numerator)

    s.skip()
    denominator = 1
    if s.text.startswith("/", s.pos):
        s.pos += 1
        where = s.pos
        denominator = int(s.match(_DIGITS, "a denominator"))
        if denominator == 0:
            raise AtomSyntaxError(text, where, "a non-zero denominator")
    s.expect(")")
    s.end()
    return rinc(lhs, rhs, Fraction(numerator, denominator))


__all__ = ["parse_atom", "format_atom"]
