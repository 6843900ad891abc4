"""
Parser for free-group words.

    word     := item*
    item     := atom exponent?
    atom     := NAME | "(" word ")"
    exponent := "^" ["-"|"+"] DIGITS | SUPERSCRIPT_MINUS? SUPERSCRIPT_DIGITS | "-" DIGITS

A NAME is a single ASCII letter optionally followed by digits (`x1`, `x_2`), so `ab⁻¹`
reads as a·b⁻¹ and the ASCII spelling `a b-1` means the same word. Whitespace separates
items but may not split an atom from its exponent.
"""
from typing import List, Tuple

from src.groups.foxcalc import WordParseError

Letter = Tuple[str, int]

_SUPERSCRIPT_DIGITS = {c: i for i, c in enumerate("⁰¹²³⁴⁵⁶⁷⁸⁹")}
_SUPERSCRIPT_MINUS = "⁻"


def invert_letters(letters: List[Letter]) -> List[Letter]:
    return [(name, -sign) for name, sign in reversed(letters)]


def power_letters(letters: List[Letter], k: int) -> List[Letter]:
    if k < 0:
        return invert_letters(letters) * (-k)
    return letters * k


class _WordParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> List[Letter]:
        letters = self._word()
        self._skip_space()
        if self.pos < len(self.text):
            self._fail(f"unexpected {self.text[self.pos]!r}")
        return letters

    def _fail(self, message: str):
        raise WordParseError(f"{message} at position {self.pos} in {self.text!r}")

    def _peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _digits(self, table=None) -> str:
        start = self.pos
        if table is None:
            while self._peek().isascii() and self._peek().isdigit():
                self.pos += 1
            return self.text[start:self.pos]
        while self._peek() and self._peek() in table:
            self.pos += 1
        return "".join(str(table[c]) for c in self.text[start:self.pos])

    def _word(self) -> List[Letter]:
        letters: List[Letter] = []
        while True:
            self._skip_space()
            if not self._peek() or self._peek() == ")":
                return letters
            letters.extend(self._item())

    def _item(self) -> List[Letter]:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            inner = self._word()
            self._skip_space()
            if self._peek() != ")":
                self._fail("missing ')'")
            self.pos += 1
        elif ch.isascii() and ch.isalpha():
            inner = [(self._name(), 1)]
        else:
            self._fail(f"unexpected {ch!r}")
        return power_letters(inner, self._exponent())

    def _name(self) -> str:
        start = self.pos
        self.pos += 1
        if self._peek() == "_" and self.text[self.pos + 1:self.pos + 2].isdigit():
            self.pos += 1
        self._digits()
        return self.text[start:self.pos]

    def _exponent(self) -> int:
        ch = self._peek()
        if ch == "^":
            self.pos += 1
            sign = 1
            if self._peek() in ("-", "+"):
                sign = -1 if self._peek() == "-" else 1
                self.pos += 1
            digits = self._digits()
            if not digits:
                self._fail("expected an integer exponent after '^'")
            return sign * int(digits)
        if ch == _SUPERSCRIPT_MINUS or ch in _SUPERSCRIPT_DIGITS:
            sign = 1
            if ch == _SUPERSCRIPT_MINUS:
                sign = -1
                self.pos += 1
            digits = self._digits(_SUPERSCRIPT_DIGITS)
            if not digits:
                self._fail("expected superscript digits")
            return sign * int(digits)
        if ch == "-" and self.text[self.pos + 1:self.pos + 2].isdigit():
            self.pos += 1
            return -int(self._digits())
        return 1


def parse_letters(text: str) -> List[Letter]:
    """Parse a word into its (unreduced) list of (generator, ±1) letters"""
    return _WordParser(text).parse()
