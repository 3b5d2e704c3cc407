"""Parser for the polynomial grammar.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := ('+' | '-') factor | power
    power  := atom ('^' INT)?
    atom   := INT ('/' INT)? | NAME | '(' expr ')'

Implicit multiplication is rejected; whitespace is ignored.
"""
import re
from fractions import Fraction

from .errors import PolynomialSyntaxError, UnknownVariable
from .poly import Poly

_TOKEN = re.compile(r"(?P<int>\d+)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()])")
_SPACE = re.compile(r"\s+")


def tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        space = _SPACE.match(text, pos)
        if space:
            pos = space.end()
            continue
        match = _TOKEN.match(text, pos)
        if not match:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((match.lastgroup, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", len(text)))
    return tokens


def identifiers(text):
    """Variable names in order of first appearance."""
    seen = []
    for kind, value, _ in tokenize(text):
        if kind == "name" and value not in seen:
            seen.append(value)
    return seen


class _Parser:
    def __init__(self, text, universe):
        self.tokens = tokenize(text)
        self.index = 0
        self.universe = tuple(universe)

    def peek(self):
        return self.tokens[self.index]

    def advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind, value=None):
        token = self.advance()
        if token[0] != kind or (value is not None and token[1] != value):
            wanted = value or kind
            raise PolynomialSyntaxError(f"expected {wanted!r}, found {token[1] or 'end of input'!r}", token[2])
        return token

    def parse(self):
        result = self.expr()
        token = self.peek()
        if token[0] != "end":
            raise PolynomialSyntaxError(f"unexpected token {token[1]!r}", token[2])
        return result

    def expr(self):
        result = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.advance()[1]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self):
        result = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.advance()
            result = result * self.factor()
        return result

    def factor(self):
        token = self.peek()
        if token[0] == "op" and token[1] in ("+", "-"):
            self.advance()
            inner = self.factor()
            return -inner if token[1] == "-" else inner
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            exponent = self.expect("int")
            base = base ** int(exponent[1])
        return base

    def atom(self):
        kind, value, pos = self.advance()
        if kind == "int":
            number = Fraction(int(value))
            if self.peek()[0] == "op" and self.peek()[1] == "/":
                self.advance()
                _, den, den_pos = self.expect("int")
                if int(den) == 0:
                    raise PolynomialSyntaxError("zero denominator", den_pos)
                number /= int(den)
            return Poly.const(number, self.universe)
        if kind == "name":
            if value not in self.universe:
                raise UnknownVariable(value)
            return Poly.var(value, self.universe)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect("op", ")")
            return inner
        raise PolynomialSyntaxError(f"unexpected token {value or 'end of input'!r}", pos)


def parse_poly(text, universe=None):
    """Parse text into a Poly over universe (inferred from the text when None)."""
    if universe is None:
        universe = identifiers(text)
    return _Parser(text, universe).parse()
