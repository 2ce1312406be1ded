"""The normal-form quotient of the built-in algebra by its Casimir relations.

Setting Omega1 = alpha and Omega2 = beta turns the two Casimirs into
rewrite rules for x3^2 and x4^2 (solve each relation for its square term,
then reduce the x4 rule by the x3 rule).  Exhaustive rewriting terminates:
with (a, b) the x3/x4 exponents of a term, the x3 rule strictly lowers
a + b while the x4 rule keeps a + b non-increasing and strictly lowers b,
so (a + b, b) drops lexicographically.  The normal forms are the unique
representatives over the monomial basis

    x1^i x2^j x3^e1 x4^e2 x5^k x6^l,  e1, e2 in {0, 1},

with k, l ranging over Z in the localization at x5, x6 and over N
otherwise; coefficients are polynomials in the parameters alpha, beta
(or rationals once the parameters are specialised).

Everything with a t3 or t4 denominator is handled in cleared-denominator
form: the quotient is a domain, so ``num / t3^a t4^b`` comparisons reduce
to exact normal-form identities of cross-multiplied numerators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .expr import ExprError, LaurentPoly, VarContext
from .g2 import AlgebraData, builtin_algebra
from .linalg import LinearSystem, solve
from .parse import parse_expr
from .poisson import PoissonStructure, apply_images

QUOTIENT_NAMES = ("x1", "x2", "x3", "x4", "x5", "x6")
_AMBIENT_TO_QUOTIENT = {f"X{i}": f"x{i}" for i in range(1, 7)}

CheckItem = tuple[str, bool, str]


def _parameter(value) -> Fraction | None:
    """'symbolic' -> None, otherwise an exact rational."""
    if value is None or value == "symbolic":
        return None
    return Fraction(str(value))


class QuotientRing:
    """The quotient with parameters alpha, beta each symbolic or rational."""

    def __init__(self, alpha="symbolic", beta="symbolic", localized: bool = False,
                 algebra: AlgebraData | None = None):
        self.alpha = _parameter(alpha)
        self.beta = _parameter(beta)
        self.localized = localized
        algebra = algebra or builtin_algebra()
        invertible = ("x5", "x6") if localized else ()
        self.context = VarContext.make(QUOTIENT_NAMES + ("alpha", "beta"),
                                       invertible=invertible,
                                       parameters=("alpha", "beta"))
        ctx = self.context
        self.alpha_poly = ctx.var("alpha") if self.alpha is None else ctx.scalar(self.alpha)
        self.beta_poly = ctx.var("beta") if self.beta is None else ctx.scalar(self.beta)
        rename = dict(_AMBIENT_TO_QUOTIENT)
        table = {key: value.rename(rename, into=ctx)
                 for key, value in algebra.structure.table.items()}
        self.structure = PoissonStructure(ctx, table)
        self.casimir1 = algebra.casimirs["Omega1"].rename(rename, into=ctx)
        self.casimir2 = algebra.casimirs["Omega2"].rename(rename, into=ctx)
        self._i3 = ctx.index("x3")
        self._i4 = ctx.index("x4")
        # x3^2 = 2 alpha - 2 Omega1 + x3^2  (the relation solved for x3^2)
        x3sq = ctx.monomial({"x3": 2})
        x4sq = ctx.monomial({"x4": 2})
        self.rewrite_x3 = 2 * self.alpha_poly - 2 * self.casimir1 + x3sq
        raw_x4 = (Fraction(2, 3) * self.beta_poly
                  - Fraction(2, 3) * self.casimir2 + x4sq)
        self.rewrite_x4 = self._reduce(raw_x4, use_x4=False)

    # -- normal form ---------------------------------------------------------
    def _specialise(self, p: LaurentPoly) -> LaurentPoly:
        images = {}
        if self.alpha is not None:
            images["alpha"] = self.context.scalar(self.alpha)
        if self.beta is not None:
            images["beta"] = self.context.scalar(self.beta)
        if p.context != self.context:
            p = p.substitute({}, into=self.context)
        return p.substitute(images) if images else p

    def _reduce(self, p: LaurentPoly, use_x4: bool = True) -> LaurentPoly:
        i3, i4 = self._i3, self._i4
        zero = Fraction(0)
        terms = dict(p.terms)
        while True:
            reducible = [m for m in terms
                         if m[i3] >= 2 or (use_x4 and m[i4] >= 2)]
            if not reducible:
                return LaurentPoly(self.context, terms)
            for m in reducible:
                # an earlier reduction in this pass may have cancelled m away
                c = terms.pop(m, None)
                if c is None:
                    continue
                if m[i3] >= 2:
                    stripped = m[:i3] + (m[i3] - 2,) + m[i3 + 1:]
                    rule = self.rewrite_x3
                else:
                    stripped = m[:i4] + (m[i4] - 2,) + m[i4 + 1:]
                    rule = self.rewrite_x4
                for rm, rc in rule.terms.items():
                    mm = tuple(a + b for a, b in zip(stripped, rm))
                    s = terms.get(mm, zero) + c * rc
                    if s:
                        terms[mm] = s
                    else:
                        terms.pop(mm, None)

    def normal_form(self, p: LaurentPoly | str) -> LaurentPoly:
        if isinstance(p, str):
            p = parse_expr(p, self.context, aliases=_AMBIENT_TO_QUOTIENT)
        for m in p.terms:
            for i in (0, 1, 2, 3):
                if m[i] < 0:
                    raise ExprError("negative exponent on x1..x4 has no"
                                    " normal form")
        return self._reduce(self._specialise(p))

    def element(self, p) -> "QuotientElement":
        return QuotientElement(self, self.normal_form(p))

    def bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        """Bracket in the ambient (localised) ring, then reduction."""
        return self.normal_form(self.structure.bracket(self._specialise(f),
                                                       self._specialise(g)))

    def rewrite_chain_depth(self, powers: dict[str, int]) -> int:
        """Longest dependent-rewrite chain reducing the given monomial.

        Only the (x3, x4) exponent pair matters: the rules inspect nothing
        else, so the recursion is memoised on that pair.
        """
        i3, i4 = self._i3, self._i4
        deltas3 = sorted({(m[i3], m[i4]) for m in self.rewrite_x3.terms})
        deltas4 = sorted({(m[i3], m[i4]) for m in self.rewrite_x4.terms})
        memo: dict[tuple[int, int], int] = {}

        def depth(a: int, b: int) -> int:
            if a < 2 and b < 2:
                return 0
            key = (a, b)
            if key not in memo:
                memo[key] = 0  # cut (impossible) cycles while recursing
                if a >= 2:
                    memo[key] = 1 + max(depth(a - 2 + da, b + db)
                                        for da, db in deltas3)
                else:
                    memo[key] = 1 + max(depth(a + da, b - 2 + db)
                                        for da, db in deltas4)
            return memo[key]

        m = self.context.monomial(powers).sorted_terms()[0][0]
        return depth(m[i3], m[i4])

    # -- basis enumeration ----------------------------------------------------
    def basis_monomials(self, degree: int):
        """Monomials of the quotient basis with total x-degree <= degree."""
        for e1, e2 in itertools.product((0, 1), repeat=2):
            rest = degree - e1 - e2
            if rest < 0:
                continue
            for i in range(rest + 1):
                for j in range(rest - i + 1):
                    for k in range(rest - i - j + 1):
                        for l in range(rest - i - j - k + 1):
                            yield self.context.monomial(
                                {"x1": i, "x2": j, "x3": e1, "x4": e2,
                                 "x5": k, "x6": l})


@dataclass(frozen=True)
class QuotientElement:
    """A quotient element held in normal form."""

    ring: QuotientRing
    poly: LaurentPoly

    def __add__(self, other):
        return QuotientElement(self.ring, self.poly + self._lift(other))

    def __sub__(self, other):
        return QuotientElement(self.ring, self.poly - self._lift(other))

    def __mul__(self, other):
        return QuotientElement(self.ring,
                               self.ring.normal_form(self.poly * self._lift(other)))

    def _lift(self, other) -> LaurentPoly:
        if isinstance(other, QuotientElement):
            return other.poly
        if isinstance(other, LaurentPoly):
            return self.ring.normal_form(other)
        return self.ring.context.scalar(other)

    def bracket(self, other) -> "QuotientElement":
        return QuotientElement(self.ring,
                               self.ring.bracket(self.poly, self._lift(other)))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __str__(self):
        return str(self.poly)


def _item(label: str, residue: LaurentPoly) -> CheckItem:
    ok = residue.is_zero()
    return (label, ok, "0" if ok else str(residue))


def check_casimirs(ring: QuotientRing, identities=None) -> list[CheckItem]:
    """normal_form(Omega1) = alpha, normal_form(Omega2) = beta, and the
    four rewrite identities reduce to zero."""
    from .g2 import REWRITE_IDENTITIES
    identities = REWRITE_IDENTITIES if identities is None else identities
    items = [
        _item("normal_form(Omega1) = alpha",
              ring.normal_form(ring.casimir1) - ring.normal_form(ring.alpha_poly)),
        _item("normal_form(Omega2) = beta",
              ring.normal_form(ring.casimir2) - ring.normal_form(ring.beta_poly)),
    ]
    for name, (lhs, rhs) in identities.items():
        residue = ring.normal_form(parse_expr(lhs, ring.context)
                                   - parse_expr(rhs, ring.context))
        items.append(_item(f"identity {name} reduces to 0", residue))
    return items


def quotient_jacobi_items(ring: QuotientRing) -> list[CheckItem]:
    """Jacobiator of every generator triple, reduced modulo the ideal."""
    ctx = ring.context
    gens = [ctx.var(n) for n in QUOTIENT_NAMES]
    items = []
    for a in range(6):
        for b in range(a + 1, 6):
            for c in range(b + 1, 6):
                x, y, z = gens[a], gens[b], gens[c]
                s = ring.structure
                jac = (s.bracket(x, s.bracket(y, z))
                       + s.bracket(y, s.bracket(z, x))
                       + s.bracket(z, s.bracket(x, y)))
                items.append(_item(
                    f"jacobi ({QUOTIENT_NAMES[a]},{QUOTIENT_NAMES[b]},"
                    f"{QUOTIENT_NAMES[c]}) mod ideal", ring.normal_form(jac)))
    return items


# -- the localisation tower -------------------------------------------------

@dataclass(frozen=True)
class LocalizedFraction:
    """num / (t3^a * t4^b) over a localised QuotientRing, num in normal form."""

    ring: QuotientRing
    num: LaurentPoly
    a: int
    b: int

    @staticmethod
    def of(ring: QuotientRing, poly, a: int = 0, b: int = 0) -> "LocalizedFraction":
        return LocalizedFraction(ring, ring.normal_form(poly), a, b)

    def _scale(self, a: int, b: int, t3: LaurentPoly, t4: LaurentPoly) -> LaurentPoly:
        num = self.num
        for _ in range(a - self.a):
            num = num * t3
        for _ in range(b - self.b):
            num = num * t4
        return self.ring.normal_form(num)

    def __add__(self, other):
        t3, t4 = _chain_denominators(self.ring)
        a, b = max(self.a, other.a), max(self.b, other.b)
        return LocalizedFraction(
            self.ring,
            self.ring.normal_form(self._scale(a, b, t3, t4)
                                  + other._scale(a, b, t3, t4)), a, b)

    def __neg__(self):
        return LocalizedFraction(self.ring, -self.num, self.a, self.b)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LocalizedFraction):
            return LocalizedFraction(
                self.ring, self.ring.normal_form(self.num * other.num),
                self.a + other.a, self.b + other.b)
        return LocalizedFraction(self.ring,
                                 self.ring.normal_form(self.num * other),
                                 self.a, self.b)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __str__(self):
        if self.a == 0 and self.b == 0:
            return str(self.num)
        return f"({self.num}) / (t3^{self.a} * t4^{self.b})"


def _chain_denominators(ring: QuotientRing) -> tuple[LaurentPoly, LaurentPoly]:
    t3 = parse_expr("x3 - 3/2*x4*x5^-1", ring.context)
    t4 = parse_expr("x4 - 2/3*x5^3*x6^-1", ring.context)
    return t3, t4


def chain_elements(ring: QuotientRing) -> dict[str, LocalizedFraction]:
    """The images of the chain elements in the localised quotient."""
    if not ring.localized:
        raise ExprError("chain elements need the localisation at x5, x6")
    ctx = ring.context
    el = lambda text: LocalizedFraction.of(ring, parse_expr(text, ctx))
    t3_poly, t4_poly = _chain_denominators(ring)
    x16 = el("x1 - 1/2*x5*x6^-1")
    x26 = el("x2 + 3/2*x4*x6^-1 - 3*x3*x5*x6^-1 + x5^3*x6^-2")
    x36 = el("x3 - x5^2*x6^-1")
    t4 = LocalizedFraction.of(ring, t4_poly)
    t3 = LocalizedFraction.of(ring, t3_poly)
    t5 = el("x5")
    t6 = el("x6")
    inv_x5 = ctx.monomial({"x5": -1})
    z1 = x16 - x36 * inv_x5 + Fraction(3, 4) * t4 * ctx.monomial({"x5": -2})
    z2 = (x26 - 3 * x36 * x36 * inv_x5
          + Fraction(9, 2) * x36 * t4 * ctx.monomial({"x5": -2})
          - Fraction(9, 4) * t4 * t4 * ctx.monomial({"x5": -3}))
    f1 = LocalizedFraction(ring, ring.normal_form(z1.num * t4_poly
                                                  - Fraction(1, 3) * t3_poly ** 2), 0, 1)
    t2 = LocalizedFraction(ring, ring.normal_form(z2.num * t4_poly
                                                  - Fraction(2, 3) * t3_poly ** 3), 0, 1)
    t1 = LocalizedFraction(ring, ring.normal_form(f1.num * t3_poly
                                                  - Fraction(1, 2) * t2.num), 1, 1)
    return {"x16": x16, "x26": x26, "x36": x36, "t1": t1, "t2": t2, "t3": t3,
            "t4": t4, "t5": t5, "t6": t6, "z1": z1, "z2": z2, "f1": f1}


def verify_localized_identities(ring: QuotientRing | None = None) -> list[CheckItem]:
    """The localisation-tower identities in cleared-denominator form."""
    ring = ring or QuotientRing(localized=True)
    e = chain_elements(ring)
    ctx = ring.context
    alpha = LocalizedFraction.of(ring, ring.alpha_poly)
    beta = LocalizedFraction.of(ring, ring.beta_poly)
    one = LocalizedFraction.of(ring, ctx.one())
    x = {name: LocalizedFraction.of(ring, ctx.var(name)) for name in QUOTIENT_NAMES}
    inv = lambda name, power=1: ctx.monomial({name: -power})

    items = []

    def check(label, lhs, rhs):
        items.append(_item(label, (lhs - rhs).num))

    check("t5 = x5", e["t5"], x["x5"])
    check("relation z2*t5 = 2*(z1*t3*t5 - alpha)",
          e["z2"] * x["x5"], 2 * (e["z1"] * e["t3"] * x["x5"] - alpha))
    check("relation t3^3*t5*t6 = 3*z1*t3*t4*t5*t6 - 3/2*beta*t5"
          " - 3*alpha*t4*t6",
          e["t3"] * e["t3"] * e["t3"] * x["x5"] * x["x6"],
          3 * e["z1"] * e["t3"] * e["t4"] * x["x5"] * x["x6"]
          - Fraction(3, 2) * beta * x["x5"] - 3 * alpha * e["t4"] * x["x6"])
    check("t1*t3*t5 = alpha", e["t1"] * e["t3"] * e["t5"], alpha)
    check("t2*t4*t6 = beta", e["t2"] * e["t4"] * e["t6"], beta)
    check("f1 = t1 + 1/2*t2*t3^-1",
          e["f1"] * e["t3"], e["t1"] * e["t3"] + Fraction(1, 2) * e["t2"])
    check("x(3,6) = t3 + 3/2*t4*t5^-1",
          e["x36"], e["t3"] + Fraction(3, 2) * e["t4"] * inv("x5"))
    check("z1 = f1 + 1/3*t3^2*t4^-1",
          e["z1"] * e["t4"], e["f1"] * e["t4"] + Fraction(1, 3) * e["t3"] * e["t3"])
    check("x1 = x(1,6) + 1/2*t5*t6^-1",
          x["x1"], e["x16"] + Fraction(1, 2) * LocalizedFraction.of(
              ring, ctx.monomial({"x5": 1, "x6": -1})))
    check("z2 = t2 + 2/3*t3^3*t4^-1",
          e["z2"] * e["t4"],
          e["t2"] * e["t4"] + Fraction(2, 3) * e["t3"] * e["t3"] * e["t3"])
    check("x3 = x(3,6) + t5^2*t6^-1",
          x["x3"], e["x36"] + LocalizedFraction.of(ring, ctx.monomial({"x5": 2, "x6": -1})))
    check("x(1,6) = z1 + x(3,6)*t5^-1 - 3/4*t4*t5^-2",
          e["x16"], e["z1"] + e["x36"] * inv("x5")
          - Fraction(3, 4) * e["t4"] * inv("x5", 2))
    check("x4 = t4 + 2/3*t5^3*t6^-1",
          x["x4"], e["t4"] + Fraction(2, 3) * LocalizedFraction.of(
              ring, ctx.monomial({"x5": 3, "x6": -1})))
    return items


# -- derivations --------------------------------------------------------------

def load_derivation_file(source) -> tuple[QuotientRing, dict[str, LaurentPoly]]:
    """Read {"alpha": "symbolic"|"p/q", "beta": ..., "images": {...}} from a
    JSON file or parsed dict; returns the specialised ring and the images."""
    import json
    from pathlib import Path
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            data = json.load(handle)
    else:
        data = source
    for field in ("alpha", "beta", "images"):
        if field not in data:
            raise ExprError(f"derivation spec misses {field!r}")
    ring = QuotientRing(alpha=data["alpha"], beta=data["beta"])
    return ring, parse_derivation(data["images"], ring)


def parse_derivation(images: dict[str, str], ring: QuotientRing) -> dict[str, LaurentPoly]:
    parsed = {}
    for name in QUOTIENT_NAMES:
        if name not in images:
            raise ExprError(f"derivation misses generator {name!r}")
        parsed[name] = parse_expr(images[name], ring.context,
                                  aliases=_AMBIENT_TO_QUOTIENT)
    return parsed


def check_quotient_derivation(images: dict[str, LaurentPoly],
                              ring: QuotientRing) -> list[CheckItem]:
    """Well-definedness on both Casimir relations plus bracket
    compatibility on all 15 generator pairs, modulo the ideal."""
    ctx = ring.context
    items = [
        _item("D preserves the Omega1 relation",
              ring.normal_form(apply_images(images, ring.casimir1))),
        _item("D preserves the Omega2 relation",
              ring.normal_form(apply_images(images, ring.casimir2))),
    ]
    for i in range(6):
        for j in range(i + 1, 6):
            ni, nj = QUOTIENT_NAMES[i], QUOTIENT_NAMES[j]
            lhs = apply_images(images, ring.structure.entry(i, j))
            rhs = (ring.structure.bracket(images[ni], ctx.var(nj))
                   + ring.structure.bracket(ctx.var(ni), images[nj]))
            items.append(_item(f"D compatible with {{{ni},{nj}}}",
                               ring.normal_form(lhs - rhs)))
    return items


def hamiltonian_quotient_images(f, ring: QuotientRing) -> dict[str, LaurentPoly]:
    f = ring.normal_form(f)
    return {name: ring.bracket(f, ring.context.var(name))
            for name in QUOTIENT_NAMES}


def bounded_inner_search(images: dict[str, LaurentPoly], ring: QuotientRing,
                         degree: int = 4) -> LaurentPoly | None:
    """Exact solve for x with {x, x_i} = D(x_i) over basis monomials of
    total degree <= degree; constant term pinned to zero.  Returns the
    canonical solution or None when the system is infeasible."""
    if ring.alpha is None or ring.beta is None:
        raise ExprError("the inner search needs numeric parameters")
    monomials = list(ring.basis_monomials(degree))
    columns = {m.sorted_terms()[0][0]: idx for idx, m in enumerate(monomials)}
    rows: dict[tuple[int, tuple], dict[int, Fraction]] = {}
    rhs: dict[tuple[int, tuple], Fraction] = {}
    for gi, name in enumerate(QUOTIENT_NAMES):
        target = ring.normal_form(images[name])
        for m, c in target.terms.items():
            rhs[(gi, m)] = c
        for idx, mono in enumerate(monomials):
            value = ring.bracket(mono, ring.context.var(name))
            for m, c in value.terms.items():
                rows.setdefault((gi, m), {})[idx] = c
    keys = sorted(set(rows) | set(rhs))
    solution = solve(((rows.get(key, {}), rhs.get(key, Fraction(0)))
                      for key in keys), len(monomials))
    if solution is None:
        return None
    total = ring.context.zero()
    for idx, c in enumerate(solution):
        if c:
            total = total + c * monomials[idx]
    return total


def bounded_centre(structure_or_ring, degree: int) -> list[LaurentPoly]:
    """Exact kernel basis of f -> ({f, x_1}, ..., {f, x_n}) in degree <= d.

    Accepts either an ambient PoissonStructure (polynomial ring, no
    reduction) or a numeric QuotientRing (brackets reduced to normal form).
    """
    if isinstance(structure_or_ring, QuotientRing):
        ring = structure_or_ring
        monomials = list(ring.basis_monomials(degree))
        gen_names = QUOTIENT_NAMES
        def bracket_with(mono, name):
            return ring.bracket(mono, ring.context.var(name))
    else:
        structure = structure_or_ring
        ctx = structure.context
        gen_names = [ctx.names[i] for i in ctx.generators()]
        monomials = [ctx.monomial(dict(zip(gen_names, exps)))
                     for exps in _ambient_exponents(len(gen_names), degree)]
        def bracket_with(mono, name):
            return structure.bracket(mono, ctx.var(name))
    system = LinearSystem()
    rows: dict[tuple[int, tuple], dict[int, Fraction]] = {}
    for gi, name in enumerate(gen_names):
        for idx, mono in enumerate(monomials):
            for m, c in bracket_with(mono, name).terms.items():
                rows.setdefault((gi, m), {})[idx] = c
    for key in sorted(rows):
        system.add_row(rows[key])
    basis = []
    some_ctx = monomials[0].context
    for vec in system.null_space(len(monomials)):
        total = some_ctx.zero()
        for idx, c in enumerate(vec):
            if c:
                total = total + c * monomials[idx]
        basis.append(total)
    return basis


def _ambient_exponents(n: int, degree: int):
    def rec(remaining, budget):
        if remaining == 1:
            for e in range(budget + 1):
                yield (e,)
            return
        for e in range(budget + 1):
            for rest in rec(remaining - 1, budget - e):
                yield (e,) + rest
    return rec(n, degree)


def spans_same_space(basis: list[LaurentPoly], expected: list[LaurentPoly]) -> bool:
    """Exact span comparison via a common coefficient matrix."""
    columns: dict[tuple, int] = {}
    def row_of(p):
        row = {}
        for m, c in p.terms.items():
            row[columns.setdefault(m, len(columns))] = c
        return row
    sys_basis = LinearSystem()
    for p in basis:
        sys_basis.add_row(row_of(p))
    sys_expected = LinearSystem()
    for p in expected:
        sys_expected.add_row(row_of(p))
    if sys_basis.rank() != sys_expected.rank():
        return False
    return all(sys_basis.contains(row_of(p)) for p in expected)
