"""S-expression reader.

Produces values from text.  Numeric literals accept decimal, `#x`,
`#b`, `#o` radix prefixes and `n/d` rationals; characters are written
`#\\c`; `'`, `` ` `` and `,` expand to quote / quasiquote / unquote
forms.  Errors carry line and column.
"""

from fractions import Fraction

from .errors import ReadError
from .values import (
    NIL,
    QUASIQUOTE,
    QUOTE,
    UNQUOTE,
    Char,
    Cons,
    Symbol,
    named_char,
    normalize_number,
)

_DELIMS = "()\"';`,"
_SUGAR = {"'": QUOTE, "`": QUASIQUOTE, ",": UNQUOTE}


class _Tokenizer:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, msg, line=None, col=None):
        return ReadError(msg, self.line if line is None else line,
                         self.col if col is None else col)

    def _advance(self, n=1):
        for _ in range(n):
            if self.pos < len(self.text):
                if self.text[self.pos] == "\n":
                    self.line += 1
                    self.col = 1
                else:
                    self.col += 1
                self.pos += 1

    def _skip_blank(self):
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance()
            elif ch == ";":
                while self.pos < len(text) and text[self.pos] != "\n":
                    self._advance()
            else:
                return

    def next_token(self):
        """Return (kind, payload, line, col) or None at end of input.

        Kinds: 'open', 'close', 'dot', 'sugar', 'atom'.
        """
        self._skip_blank()
        if self.pos >= len(self.text):
            return None
        line, col = self.line, self.col
        ch = self.text[self.pos]
        if ch == "(":
            self._advance()
            return ("open", None, line, col)
        if ch == ")":
            self._advance()
            return ("close", None, line, col)
        if ch in _SUGAR:
            self._advance()
            return ("sugar", _SUGAR[ch], line, col)
        if ch == '"':
            return ("atom", self._read_string(), line, col)
        if ch == "#":
            return ("atom", self._read_hash(), line, col)
        word = self._read_word()
        if word == ".":
            return ("dot", None, line, col)
        return ("atom", _parse_atom(word, self, line, col), line, col)

    def _read_word(self):
        start = self.pos
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n" or ch in _DELIMS:
                break
            self._advance()
        return text[start:self.pos]

    def _read_string(self):
        line, col = self.line, self.col
        self._advance()  # opening quote
        out = []
        text = self.text
        while True:
            if self.pos >= len(text):
                raise self.error("unterminated string", line, col)
            ch = text[self.pos]
            self._advance()
            if ch == '"':
                return "".join(out)
            if ch == "\\":
                if self.pos >= len(text):
                    raise self.error("unterminated string", line, col)
                esc = text[self.pos]
                self._advance()
                if esc == "n":
                    out.append("\n")
                elif esc == "t":
                    out.append("\t")
                else:
                    out.append(esc)
            else:
                out.append(ch)

    def _read_hash(self):
        line, col = self.line, self.col
        self._advance()  # '#'
        if self.pos >= len(self.text):
            raise self.error("dangling #", line, col)
        ch = self.text[self.pos]
        if ch == "\\":
            self._advance()
            if self.pos >= len(self.text):
                raise self.error("dangling character literal", line, col)
            first = self.text[self.pos]
            self._advance()
            rest = self._read_word()
            if rest:
                named = named_char(first + rest)
                if named is None:
                    raise self.error("unknown character name #\\%s" % (first + rest),
                                     line, col)
                return Char(named)
            return Char(first)
        if ch in "xXbBoO":
            base = {"x": 16, "b": 2, "o": 8}[ch.lower()]
            self._advance()
            word = self._read_word()
            try:
                return int(word, base)
            except ValueError:
                raise self.error("bad radix-%d literal #%s%s" % (base, ch, word),
                                 line, col) from None
        raise self.error("unsupported # syntax", line, col)


def _parse_atom(word, tok, line, col):
    if not word:
        raise tok.error("empty token", line, col)
    try:
        return int(word, 10)
    except ValueError:
        pass
    if "/" in word:
        num, _, den = word.partition("/")
        try:
            n, d = int(num, 10), int(den, 10)
        except ValueError:
            return Symbol(word)
        if d == 0:
            raise tok.error("zero denominator in %s" % word, line, col)
        return normalize_number(Fraction(n, d))
    return Symbol(word)


def _read_one(tok, token):
    kind, payload, line, col = token
    if kind == "atom":
        return payload
    if kind == "sugar":
        nxt = tok.next_token()
        if nxt is None:
            raise tok.error("nothing after %s" % payload.name, line, col)
        return Cons(payload, Cons(_read_one(tok, nxt), NIL))
    if kind == "open":
        return _read_list(tok, line, col)
    if kind == "close":
        raise tok.error("unexpected )", line, col)
    raise tok.error("unexpected .", line, col)


def _read_list(tok, line, col):
    items = []
    tail = NIL
    while True:
        token = tok.next_token()
        if token is None:
            raise tok.error("unterminated list", line, col)
        kind = token[0]
        if kind == "close":
            break
        if kind == "dot":
            if not items:
                raise tok.error("dot at start of list", token[2], token[3])
            token = tok.next_token()
            if token is None or token[0] in ("close", "dot"):
                raise tok.error("dot needs exactly one trailing value", line, col)
            tail = _read_one(tok, token)
            closer = tok.next_token()
            if closer is None or closer[0] != "close":
                raise tok.error("expected ) after dotted tail", line, col)
            break
        items.append(_read_one(tok, token))
    out = tail
    for item in reversed(items):
        out = Cons(item, out)
    return out


def read_values_with_pos(text):
    """Read all top-level values, returning [(value, line, col)]."""
    tok = _Tokenizer(text)
    out = []
    while True:
        token = tok.next_token()
        if token is None:
            return out
        out.append((_read_one(tok, token), token[2], token[3]))


def read_values(text):
    return [v for v, _, _ in read_values_with_pos(text)]


def read_one_value(text):
    vals = read_values(text)
    if len(vals) != 1:
        raise ReadError("expected exactly one value", 1, 1)
    return vals[0]
