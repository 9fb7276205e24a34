"""Text grammar for polar-decomposed symbols.

    symbol := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := coeff | 'e(' int ')' | 'r^' rational | 'log(r)^' int
            | 'z' ['^' int] | 'zbar' ['^' int]
    coeff  := rational | '(' rational ',' rational ')'

'z^l' abbreviates e(l)*r^l and 'zbar^l' abbreviates e(-l)*r^l.  A bare
rational is a constant term.  Exponents may be negative or fractional
('r^-2', 'r^3/2').  Canonical output always prints the full
coeff*e(n)*r^q[*log(r)^m] form, one term per radial monomial, so
parse -> print -> parse is the identity on canonical documents.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exact import GaussianRational, grat
from .radial import RadialSymbol
from .operators import PolarSymbol


class SymbolSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


@dataclass(frozen=True)
class SymbolDocument:
    """A parsed symbol along with its source text and parse warnings."""

    symbol: PolarSymbol
    source: str
    warnings: tuple[str, ...] = ()

    def window(self) -> tuple[int, int]:
        return self.symbol.window()


def parse_symbol(text: str) -> SymbolDocument:
    terms, warnings = _split_terms(text)
    parts = []
    for sign, term, pos in terms:
        coeff, degree, exponent, log_power = _parse_term(term, pos)
        coeff = coeff * sign
        if coeff.is_zero:
            warnings.append(f"zero-coefficient term ignored at position {pos}")
            continue
        parts.append((degree, RadialSymbol.monomial(coeff, exponent, log_power)))
    return SymbolDocument(PolarSymbol(parts), text, tuple(warnings))


def format_symbol(symbol: PolarSymbol) -> str:
    """Canonical text form: degrees descending, radial terms in storage order."""
    if symbol.is_zero:
        return "0*e(0)*r^0"
    chunks = []
    for degree, radial in sorted(symbol.parts, reverse=True):
        for coeff, exponent, log_power in radial.terms:
            piece = f"{_format_coeff(coeff)}*e({degree})*r^{exponent}"
            if log_power:
                piece += f"*log(r)^{log_power}"
            chunks.append(piece)
    return " + ".join(chunks)


def _format_coeff(c: GaussianRational) -> str:
    if c.im == 0:
        return str(c.re)
    return f"({c.re},{c.im})"


def _split_terms(text: str):
    """Top-level split on +/- outside parentheses; returns (sign, term, pos)."""
    terms = []
    warnings: list[str] = []
    depth = 0
    sign = 1
    start = 0
    i = 0
    stripped_any = False
    while i <= len(text):
        ch = text[i] if i < len(text) else "+"
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SymbolSyntaxError("unbalanced ')'", i)
        elif (ch in "+-" and depth == 0 and i == len(text)) or (
            ch in "+-" and depth == 0 and i > start and text[start:i].strip()
            and not text[: i].rstrip().endswith(("*", "^", "(", ","))
        ):
            chunk = text[start:i].strip()
            if not chunk:
                raise SymbolSyntaxError("empty term", start)
            terms.append((sign, chunk, start))
            sign = 1 if ch == "+" else -1
            start = i + 1
            stripped_any = True
        i += 1
    if depth != 0:
        raise SymbolSyntaxError("unbalanced '('", len(text))
    if not terms:
        raise SymbolSyntaxError("empty symbol", 0)
    return terms, warnings


def _parse_term(term: str, pos: int):
    coeff = grat(1)
    degree = 0
    exponent = Fraction(0)
    log_power = 0
    seen_angular = False
    for factor in _split_factors(term, pos):
        f = factor.strip()
        if not f:
            raise SymbolSyntaxError("empty factor", pos)
        if f.startswith("e(") and f.endswith(")"):
            if seen_angular:
                raise SymbolSyntaxError("repeated angular factor", pos)
            seen_angular = True
            degree += _parse_int(f[2:-1], pos)
        elif f == "z" or f.startswith("z^"):
            l = 1 if f == "z" else _parse_int(f[2:], pos)
            degree += l
            exponent += l
        elif f == "zbar" or f.startswith("zbar^"):
            l = 1 if f == "zbar" else _parse_int(f[5:], pos)
            degree -= l
            exponent += l
        elif f.startswith("r^"):
            exponent += _parse_fraction(f[2:], pos)
        elif f == "r":
            exponent += 1
        elif f.startswith("log(r)^"):
            log_power += _parse_int(f[7:], pos)
        elif f == "log(r)":
            log_power += 1
        else:
            coeff = coeff * _parse_coeff(f, pos)
    return coeff, degree, exponent, log_power


def _split_factors(term: str, pos: int):
    out = []
    depth = 0
    start = 0
    for i, ch in enumerate(term):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "*" and depth == 0:
            out.append(term[start:i])
            start = i + 1
    out.append(term[start:])
    return out


def _parse_int(text: str, pos: int) -> int:
    try:
        return int(text.strip())
    except ValueError as exc:
        raise SymbolSyntaxError(f"expected integer, got {text!r}", pos) from exc


def _parse_fraction(text: str, pos: int) -> Fraction:
    t = text.strip()
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError) as exc:
        raise SymbolSyntaxError(f"expected rational, got {text!r}", pos) from exc


def _parse_coeff(text: str, pos: int) -> GaussianRational:
    t = text.strip()
    if t.startswith("(") and t.endswith(")") and "," in t:
        re_s, im_s = t[1:-1].split(",", 1)
        return GaussianRational(_parse_fraction(re_s, pos), _parse_fraction(im_s, pos))
    return GaussianRational(_parse_fraction(t, pos))
