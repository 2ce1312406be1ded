"""Sparse Laurent polynomials over Q with named variable contexts.

The coefficient field is Q, realised by ``fractions.Fraction`` (always in
lowest terms with a positive denominator, so arithmetic is exact).  A
polynomial is a dict mapping exponent tuples to nonzero coefficients:

    {(1, 0, 1, 0, 1, 0): Fraction(1), (0, 0, 2, 0, 0, 0): Fraction(1, 2)}

over a context (X1, ..., X6) reads as X1*X3*X5 + 1/2*X3^2.  Negative
exponents are allowed exactly at positions the context marks invertible.
Parameter variables (central scalars such as alpha, beta) are ordinary
variables that are never invertible and carry no bracket.

All values are immutable after construction; equality of two polynomials
is equality of their term dicts over equal contexts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

Rational = Fraction

#: Exponent vector indexed by context position.  Negative entries are only
#: valid at positions the context marks invertible.
Monomial = tuple[int, ...]


class ExprError(ValueError):
    """Base error for expression-level failures."""


class ContextMismatch(ExprError):
    """Two operands live over different variable contexts."""


class InvertibilityError(ExprError):
    """A negative exponent appeared on a non-invertible variable."""


@dataclass(frozen=True)
class VarContext:
    """An ordered tuple of variable names with invertibility/parameter masks."""

    names: tuple[str, ...]
    invertible: tuple[bool, ...]
    parameters: tuple[bool, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not (len(self.names) == len(self.invertible) == len(self.parameters)):
            raise ExprError("context masks must match the number of names")
        if len(set(self.names)) != len(self.names):
            raise ExprError("variable names must be unique")
        for name, inv, par in zip(self.names, self.invertible, self.parameters):
            if par and inv:
                raise ExprError(f"parameter variable {name!r} cannot be invertible")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @staticmethod
    def make(names: Iterable[str], invertible: Iterable[str] = (),
             parameters: Iterable[str] = ()) -> "VarContext":
        names = tuple(names)
        inv, par = set(invertible), set(parameters)
        unknown = (inv | par) - set(names)
        if unknown:
            raise ExprError(f"mask names not in context: {sorted(unknown)}")
        return VarContext(names,
                          tuple(n in inv for n in names),
                          tuple(n in par for n in names))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise ExprError(f"unknown variable {name!r}") from None

    def generators(self) -> list[int]:
        """Indices of the non-parameter variables."""
        return [i for i, p in enumerate(self.parameters) if not p]

    def check_monomial(self, exps: Monomial) -> None:
        if len(exps) != self.rank:
            raise ExprError("exponent vector has wrong length")
        for e, inv, name in zip(exps, self.invertible, self.names):
            if e < 0 and not inv:
                raise InvertibilityError(
                    f"negative exponent on non-invertible variable {name!r}")

    # -- element constructors ------------------------------------------
    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.scalar(1)

    def scalar(self, c) -> "LaurentPoly":
        c = Fraction(c)
        if c == 0:
            return self.zero()
        return LaurentPoly(self, {(0,) * self.rank: c})

    def var(self, name: str, power: int = 1) -> "LaurentPoly":
        return self.monomial({name: power})

    def monomial(self, powers: Mapping[str, int], coeff=1) -> "LaurentPoly":
        exps = [0] * self.rank
        for name, e in powers.items():
            exps[self.index(name)] = e
        coeff = Fraction(coeff)
        if coeff == 0:
            return self.zero()
        return LaurentPoly(self, {tuple(exps): coeff})


def _term_key(exps: Monomial):
    # Ascending "positive degree", then descending lex: this makes
    # X2 + 3/2*X4*X6^-1 - 3*X3*X5*X6^-1 + X5^3*X6^-2 print in that order.
    return (sum(e for e in exps if e > 0), tuple(-e for e in exps))


class LaurentPoly:
    """Immutable sparse Laurent polynomial over a fixed :class:`VarContext`."""

    __slots__ = ("context", "terms", "_hash")

    def __init__(self, context: VarContext, terms: Mapping[Monomial, Fraction]):
        clean: dict[Monomial, Fraction] = {}
        for exps, c in terms.items():
            c = Fraction(c)
            if c == 0:
                continue
            context.check_monomial(exps)
            clean[exps] = c
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- basic queries --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        zero = (0,) * self.context.rank
        return all(m == zero for m in self.terms)

    def constant_value(self) -> Fraction:
        zero = (0,) * self.context.rank
        if not all(m == zero for m in self.terms):
            raise ExprError("polynomial is not constant")
        return self.terms.get(zero, Fraction(0))

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coeff(self, exps: Monomial) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _term_key(kv[0]))

    def var_degree(self, skip_parameters: bool = True) -> int:
        """Max over terms of the summed exponents (parameters skipped)."""
        if self.is_zero():
            return 0
        par = self.context.parameters
        return max(sum(e for i, e in enumerate(m) if not (skip_parameters and par[i]))
                   for m in self.terms)

    # -- ring operations -------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.context != self.context:
                raise ContextMismatch("operands live over different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return self.context.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, Fraction(0)) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return LaurentPoly(self.context, terms)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly(self.context, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = terms.get(m, Fraction(0)) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return LaurentPoly(self.context, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n == 0:
            return self.context.one()
        if n < 0:
            return self.monomial_inverse() ** (-n)
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def monomial_inverse(self) -> "LaurentPoly":
        """Inverse of a single-term polynomial, mask permitting."""
        if len(self.terms) != 1:
            raise InvertibilityError("only monomials can be inverted")
        (m, c), = self.terms.items()
        inv = tuple(-e for e in m)
        self.context.check_monomial(inv)
        return LaurentPoly(self.context, {inv: 1 / c})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.context.scalar(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self):
        h = object.__getattribute__(self, "_hash")
        if h is None:
            h = hash((self.context, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    # -- calculus ---------------------------------------------------------
    def partial(self, name: str) -> "LaurentPoly":
        """Formal partial derivative (valid for negative exponents)."""
        i = self.context.index(name)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[i]
            if e == 0:
                continue
            dm = m[:i] + (e - 1,) + m[i + 1:]
            s = terms.get(dm, Fraction(0)) + c * e
            if s:
                terms[dm] = s
            else:
                terms.pop(dm, None)
        return LaurentPoly(self.context, terms)

    def substitute(self, images: Mapping[str, "LaurentPoly"],
                   into: VarContext | None = None) -> "LaurentPoly":
        """Simultaneous substitution, exactly evaluated.

        Variables absent from ``images`` map to their namesakes in the
        target context.  A variable occurring with a negative exponent must
        have a monomial image (the fraction layer handles the general case).
        """
        target = into if into is not None else self.context
        table: dict[int, LaurentPoly] = {}
        for name, img in images.items():
            if img.context != target:
                raise ContextMismatch("substitution image over wrong context")
            table[self.context.index(name)] = img
        result = target.zero()
        for m, c in self.terms.items():
            piece = target.scalar(c)
            for i, e in enumerate(m):
                if e == 0:
                    continue
                img = table.get(i)
                if img is None:
                    img = target.var(self.context.names[i])
                if e < 0 and not img.is_monomial():
                    raise InvertibilityError(
                        f"non-monomial image for {self.context.names[i]!r}"
                        " at a negative exponent")
                piece = piece * img ** e
            result = result + piece
        return result

    def rename(self, mapping: Mapping[str, str], into: VarContext) -> "LaurentPoly":
        """Variable-renaming transport into another context."""
        images = {old: into.var(new) for old, new in mapping.items()}
        return self.substitute(images, into=into)

    # -- printing ----------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"LaurentPoly({format_poly(self)})"


def format_poly(p: LaurentPoly) -> str:
    """Canonical text form; parse(format(p)) == p for every p."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for m, c in p.sorted_terms():
        factors = []
        for name, e in zip(p.context.names, m):
            if e == 0:
                continue
            factors.append(name if e == 1 else f"{name}^{e}")
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(mag)] + factors)
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def divide_exact(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly | None:
    """Return f/g when g divides f exactly, else None.

    Works on the Laurent lattice by shifting both operands into ordinary
    polynomials first; the quotient is recovered with the inverse shift.
    """
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    ctx = f.context
    if g.context != ctx:
        raise ContextMismatch("operands live over different contexts")
    n = ctx.rank

    def min_exps(p):
        mins = [0] * n
        for m in p.terms:
            for i, e in enumerate(m):
                mins[i] = min(mins[i], e)
        return mins

    fshift = min_exps(f)
    gshift = min_exps(g)
    fterms = {tuple(e - s for e, s in zip(m, fshift)): c for m, c in f.terms.items()}
    gterms = {tuple(e - s for e, s in zip(m, gshift)): c for m, c in g.terms.items()}

    def leading(terms):
        return max(terms, key=_term_key)

    glead = leading(gterms)
    gc = gterms[glead]
    quot: dict[Monomial, Fraction] = {}
    rem = dict(fterms)
    while rem:
        flead = leading(rem)
        qm = tuple(a - b for a, b in zip(flead, glead))
        if any(e < 0 for e in qm):
            return None
        qc = rem[flead] / gc
        quot[qm] = qc
        for m, c in gterms.items():
            mm = tuple(a + b for a, b in zip(m, qm))
            s = rem.get(mm, Fraction(0)) - qc * c
            if s:
                rem[mm] = s
            else:
                rem.pop(mm, None)
    shift = tuple(fs - gs for fs, gs in zip(fshift, gshift))
    out = {}
    for m, c in quot.items():
        mm = tuple(a + b for a, b in zip(m, shift))
        ctx.check_monomial(mm)
        out[mm] = c
    return LaurentPoly(ctx, out)
