"""Tokenizer for annotated-program source text.

Whitespace-insensitive; // comments run to end of line. Unicode operator
spellings from math notation lex as synonyms of the ASCII ones. Two quirks
worth noting:

- String literals denote int arrays of character codes and are only legal in
  behavior blocks; the letter N inside a string maps to newline (code 10).
  The lexer emits them as array-literal tokens directly.
- A brace group consisting solely of (possibly negated) integer literals,
  like {1,2,3}, is coalesced into a single array-literal token. Braces in
  every other position (blocks, valMaps, quantifier bodies) stay plain
  punctuation. {} is left to the parser, which reads it as an empty array
  in value position.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import LexError
from .syntax import Loc

KEYWORDS = {
    "int", "bool", "boolean", "if", "else", "while", "break", "return",
    "true", "false", "forall", "exists", "good", "bad", "dontCare",
}

# multi-char operators, longest first
_MULTI = ["..", "&&", "||", "=>", "==", "!=", "<=", ">=", "++", "--"]
_SINGLE = set("{}()[],;:=!<>+-*/%.@")

_UNICODE = {
    "≤": "<=",   # <=
    "≥": ">=",   # >=
    "≠": "!=",   # !=
    "∧": "&&",   # and
    "∨": "||",   # or
    "¬": "!",    # not
    "⇒": "=>",   # implies
    "→": "=>",   # -> sometimes used for implies
}
_UNICODE_KW = {
    "∀": "forall",
    "∃": "exists",
}


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "kw" | "op" | "array" | "at" | "eof"
    text: str
    loc: Loc
    value: object = None  # int for "int", list[int] for "array"

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}@{self.loc})"


def tokenize(source: str) -> list:
    return _Lexer(source).run()


class _Lexer:
    def __init__(self, src):
        self.src = src
        self.i = 0
        self.line = 1
        self.col = 1
        self.toks = []

    def loc(self):
        return Loc(self.line, self.col)

    def error(self, msg):
        raise LexError(self.loc(), msg)

    def advance(self, n=1):
        for _ in range(n):
            if self.i < len(self.src):
                if self.src[self.i] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.i += 1

    def peek(self, k=0) -> str:
        j = self.i + k
        return self.src[j] if j < len(self.src) else ""

    def emit(self, kind, text, loc, value=None):
        self.toks.append(Token(kind, text, loc, value))

    def run(self):
        while self.i < len(self.src):
            c = self.peek()
            if c in " \t\r\n":
                self.advance()
                continue
            if c == "/" and self.peek(1) == "/":
                while self.i < len(self.src) and self.peek() != "\n":
                    self.advance()
                continue
            loc = self.loc()
            if c.isdigit():
                self.lex_int(loc)
            elif c.isalpha() or c == "_":
                self.lex_word(loc)
            elif c in _UNICODE_KW:
                self.emit("kw", _UNICODE_KW[c], loc)
                self.advance()
            elif c in _UNICODE:
                self.emit("op", _UNICODE[c], loc)
                self.advance()
            elif c == '"':
                self.lex_string(loc)
            elif c == "@":
                self.lex_at(loc)
            elif c == "{":
                if not self.try_array_group(loc):
                    self.emit("op", "{", loc)
                    self.advance()
            else:
                two = self.src[self.i:self.i + 2]
                if two in _MULTI:
                    self.emit("op", two, loc)
                    self.advance(2)
                elif c in _SINGLE:
                    self.emit("op", c, loc)
                    self.advance()
                else:
                    self.error(f"unexpected character {c!r}")
        self.toks.append(Token("eof", "", self.loc()))
        return self.toks

    def lex_int(self, loc):
        start = self.i
        while self.peek().isdigit():
            self.advance()
        text = self.src[start:self.i]
        self.emit("int", text, loc, int(text))

    def lex_word(self, loc):
        start = self.i
        while self.peek().isalnum() or self.peek() == "_":
            self.advance()
        text = self.src[start:self.i]
        self.emit("kw" if text in KEYWORDS else "ident", text, loc)

    def lex_at(self, loc):
        self.advance()  # @
        start = self.i
        while self.peek().isalpha():
            self.advance()
        word = self.src[start:self.i]
        if word not in ("pre", "post", "behavior"):
            raise LexError(loc, f"unknown annotation @{word}")
        self.emit("at", "@" + word, loc)

    def lex_string(self, loc):
        # "aaN" -> [97, 97, 10]; only char N is special
        self.advance()
        codes = []
        text = ['"']
        while True:
            c = self.peek()
            if c == "":
                raise LexError(loc, "unterminated string literal")
            if c == "\n":
                raise LexError(loc, "newline in string literal")
            self.advance()
            text.append(c)
            if c == '"':
                break
            codes.append(10 if c == "N" else ord(c))
        self.emit("array", "".join(text), loc, codes)

    def try_array_group(self, loc) -> bool:
        """Coalesce {int, int, ...} (non-empty, literals only) into one token."""
        j = self.i + 1
        items = []
        sign = 1
        state = "want-item"
        while j < len(self.src):
            c = self.src[j]
            if c in " \t\r\n":
                j += 1
                continue
            if state == "want-item":
                if c == "-":
                    sign = -sign
                    j += 1
                    continue
                if not c.isdigit():
                    return False
                k = j
                while k < len(self.src) and self.src[k].isdigit():
                    k += 1
                items.append(sign * int(self.src[j:k]))
                sign = 1
                j = k
                state = "want-sep"
            else:  # want-sep
                if c == ",":
                    state = "want-item"
                    j += 1
                elif c == "}":
                    text = self.src[self.i:j + 1]
                    self.emit("array", text, loc, items)
                    while self.i <= j:
                        self.advance()
                    return True
                else:
                    return False
        return False
