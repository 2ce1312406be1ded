"""Poisson structures on (Laurent) polynomial contexts.

A structure is an antisymmetric table of generator brackets {x_i, x_j}
(i < j) extended to arbitrary elements through the bi-derivation formula

    {f, g} = sum_{i,j} {x_i, x_j} * df/dx_i * dg/dx_j.

Jacobi and Poisson-derivation checking run on generators only: the
Jacobiator of a biderivation-extended bracket is a tri-derivation, and the
defect of the derivation identity is a bi-derivation, so vanishing on
generators is vanishing everywhere.  Parameter variables have zero bracket
with everything by construction (they never enter the table).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .expr import ContextMismatch, ExprError, LaurentPoly, VarContext


class EtaError(ExprError):
    """The eta scalar of a Poisson-Ore index is undefined or inconsistent."""


@dataclass(frozen=True)
class PoissonStructure:
    """Bracket table {x_i, x_j} for i < j over the non-parameter generators."""

    context: VarContext
    table: dict[tuple[int, int], LaurentPoly]

    def __post_init__(self):
        gens = set(self.context.generators())
        for (i, j), value in self.table.items():
            if i not in gens or j not in gens or not i < j:
                raise ExprError(f"bad table key {(i, j)}: need generator pair i < j")
            if value.context != self.context:
                raise ContextMismatch("table entry over wrong context")

    def entry(self, i: int, j: int) -> LaurentPoly:
        """{x_i, x_j} with antisymmetry filled in; zero when absent."""
        if i == j:
            return self.context.zero()
        if i < j:
            return self.table.get((i, j), self.context.zero())
        return -self.table.get((j, i), self.context.zero())

    def gen(self, i: int) -> LaurentPoly:
        return self.context.var(self.context.names[i])

    def bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        if f.context != self.context or g.context != self.context:
            raise ContextMismatch("bracket operands over wrong context")
        names = self.context.names
        fp: dict[int, LaurentPoly] = {}
        gp: dict[int, LaurentPoly] = {}
        result = self.context.zero()
        for (i, j), b in self.table.items():
            if b.is_zero():
                continue
            fi = fp.setdefault(i, f.partial(names[i]))
            fj = fp.setdefault(j, f.partial(names[j]))
            gi = gp.setdefault(i, g.partial(names[i]))
            gj = gp.setdefault(j, g.partial(names[j]))
            cross = fi * gj - fj * gi
            if not cross.is_zero():
                result = result + b * cross
        return result


def bracket(f: LaurentPoly, g: LaurentPoly, structure: PoissonStructure) -> LaurentPoly:
    return structure.bracket(f, g)


@dataclass(frozen=True)
class DerivationSpec:
    """A derivation given by its images on the context generators."""

    context: VarContext
    images: dict[str, LaurentPoly]

    def __post_init__(self):
        gens = {self.context.names[i] for i in self.context.generators()}
        missing = gens - set(self.images)
        if missing:
            raise ExprError(f"derivation misses generators {sorted(missing)}")
        for name, img in self.images.items():
            if name not in gens:
                raise ExprError(f"image given for non-generator {name!r}")
            if img.context != self.context:
                raise ContextMismatch("derivation image over wrong context")

    def apply(self, f: LaurentPoly) -> LaurentPoly:
        """Leibniz extension: D(f) = sum_v D(v) * df/dv."""
        result = self.context.zero()
        for name, img in self.images.items():
            if img.is_zero():
                continue
            d = f.partial(name)
            if not d.is_zero():
                result = result + img * d
        return result

    @staticmethod
    def zero(context: VarContext) -> "DerivationSpec":
        names = [context.names[i] for i in context.generators()]
        return DerivationSpec(context, {n: context.zero() for n in names})


def apply_images(images: Mapping[str, LaurentPoly], f: LaurentPoly) -> LaurentPoly:
    """Leibniz extension of a partial image table (absent names act as 0)."""
    result = f.context.zero()
    for name, img in images.items():
        if img.is_zero():
            continue
        d = f.partial(name)
        if not d.is_zero():
            result = result + img * d
    return result


def hamiltonian_derivation(f: LaurentPoly, structure: PoissonStructure) -> DerivationSpec:
    """ham_f = {f, -} restricted to generator images."""
    ctx = structure.context
    images = {ctx.names[i]: structure.bracket(f, structure.gen(i))
              for i in ctx.generators()}
    return DerivationSpec(ctx, images)


def jacobiator(structure: PoissonStructure, i: int, j: int, k: int) -> LaurentPoly:
    """{x_i,{x_j,x_k}} + {x_j,{x_k,x_i}} + {x_k,{x_i,x_j}} on generators."""
    x = structure.gen
    b = structure.bracket
    return (b(x(i), structure.entry(j, k))
            + b(x(j), structure.entry(k, i))
            + b(x(k), structure.entry(i, j)))


def check_jacobi(structure: PoissonStructure):
    """None on pass; else the first failing generator triple with residue."""
    gens = structure.context.generators()
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            for c in range(b + 1, len(gens)):
                i, j, k = gens[a], gens[b], gens[c]
                residue = jacobiator(structure, i, j, k)
                if not residue.is_zero():
                    return (i, j, k), residue
    return None


def derivation_defect(D: DerivationSpec, structure: PoissonStructure,
                      i: int, j: int) -> LaurentPoly:
    """D({x_i,x_j}) - {D(x_i),x_j} - {x_i,D(x_j)} on a generator pair."""
    names = structure.context.names
    lhs = D.apply(structure.entry(i, j))
    rhs = (structure.bracket(D.images[names[i]], structure.gen(j))
           + structure.bracket(structure.gen(i), D.images[names[j]]))
    return lhs - rhs


def check_poisson_derivation(D: DerivationSpec, structure: PoissonStructure):
    """None on pass; else the first failing generator pair with residue."""
    gens = structure.context.generators()
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            i, j = gens[a], gens[b]
            residue = derivation_defect(D, structure, i, j)
            if not residue.is_zero():
                return (i, j), residue
    return None


# -- Poisson-Ore data -------------------------------------------------------

@dataclass(frozen=True)
class PoissonOreData:
    """sigma/delta tables of an iterated Poisson-Ore presentation.

    ``sigma[(i, j)]`` (j < i) is the scalar mu_ij with sigma_i(X_j) =
    mu_ij X_j; ``delta[(i, j)]`` is delta_i(X_j), zero entries may be
    omitted.  Indices are 0-based context positions.
    """

    context: VarContext
    sigma: dict[tuple[int, int], Fraction]
    delta: dict[tuple[int, int], LaurentPoly]
    _eta: dict[int, Fraction] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for (i, j) in self.sigma:
            if not j < i:
                raise ExprError(f"sigma key {(i, j)} must have j < i")
        for (i, j), value in self.delta.items():
            if not j < i:
                raise ExprError(f"delta key {(i, j)} must have j < i")
            if value.context != self.context:
                raise ContextMismatch("delta entry over wrong context")

    def mu(self, i: int, j: int) -> Fraction:
        """Full antisymmetric scalar matrix entry mu_ij."""
        if i == j:
            return Fraction(0)
        if j < i:
            return Fraction(self.sigma.get((i, j), 0))
        return -Fraction(self.sigma.get((j, i), 0))

    def mu_matrix(self) -> list[list[Fraction]]:
        n = self.context.rank
        return [[self.mu(i, j) for j in range(n)] for i in range(n)]

    def sigma_images(self, i: int) -> dict[str, LaurentPoly]:
        names = self.context.names
        return {names[j]: self.mu(i, j) * self.context.var(names[j])
                for j in range(i)}

    def delta_images(self, i: int) -> dict[str, LaurentPoly]:
        names = self.context.names
        return {names[j]: self.delta.get((i, j), self.context.zero())
                for j in range(i)}

    def delta_is_zero(self, i: int) -> bool:
        return all(self.delta.get((i, j), self.context.zero()).is_zero()
                   for j in range(i))

    def eta(self, i: int) -> Fraction:
        """The scalar eta_i with (delta_i sigma_i - sigma_i delta_i) = eta_i delta_i.

        Both maps are extended as derivations; eta is matched on every
        generator X_j (j < i) with delta_i(X_j) != 0 and must agree across
        them.  Undefined when delta_i vanishes identically.
        """
        cached = self._eta.get(i)
        if cached is not None:
            return cached
        sigma = self.sigma_images(i)
        delta = self.delta_images(i)
        eta: Fraction | None = None
        for j in range(i):
            name = self.context.names[j]
            dj = delta[name]
            if dj.is_zero():
                continue
            q = apply_images(delta, sigma[name]) - apply_images(sigma, dj)
            candidate = _scalar_ratio(q, dj)
            if candidate is None:
                raise EtaError(
                    f"(delta sigma - sigma delta)(X_{j + 1}) is not a scalar"
                    f" multiple of delta_{i + 1}(X_{j + 1})")
            if eta is None:
                eta = candidate
            elif eta != candidate:
                raise EtaError(
                    f"inconsistent eta at index {i + 1}: {eta} vs {candidate}")
        if eta is None:
            raise EtaError(f"eta undefined: delta_{i + 1} vanishes on generators")
        if eta == 0:
            raise EtaError(f"eta_{i + 1} is zero; the rescaling step degenerates")
        self._eta[i] = eta
        return eta

    def check_locally_nilpotent(self, bound: int = 16) -> dict[int, int]:
        """Nilpotency witness: index i -> least k with delta_i^k = 0 on
        generator images; raises when the bound is exceeded."""
        out = {}
        for i in range(1, self.context.rank):
            delta = self.delta_images(i)
            worst = 0
            for j in range(i):
                p = delta[self.context.names[j]]
                k = 1
                while not p.is_zero():
                    if k > bound:
                        raise EtaError(
                            f"delta_{i + 1} not nilpotent on X_{j + 1}"
                            f" within {bound} steps")
                    p = apply_images(delta, p)
                    k += 1
                worst = max(worst, k)
            out[i] = worst
        return out


def _scalar_ratio(p: LaurentPoly, q: LaurentPoly) -> Fraction | None:
    """c with p == c*q, if such a scalar exists (q != 0)."""
    m, c = next(iter(q.terms.items()))
    ratio = p.coeff(m) / c
    return ratio if p == ratio * q else None


# -- gradings ---------------------------------------------------------------

@dataclass(frozen=True)
class WeightVector:
    """Integer Z^2-weights for the non-parameter generators, by position."""

    context: VarContext
    weights: dict[int, tuple[int, int]]

    def __post_init__(self):
        gens = set(self.context.generators())
        if set(self.weights) != gens:
            raise ExprError("weights must cover exactly the generators")

    def term_weight(self, exps) -> tuple[int, int]:
        a = b = 0
        for i, e in enumerate(exps):
            if e and i in self.weights:
                wa, wb = self.weights[i]
                a += e * wa
                b += e * wb
        return (a, b)

    def weight_of(self, f: LaurentPoly) -> tuple[int, int] | None:
        """Common weight of all terms, or None when inhomogeneous/zero."""
        weight = None
        for m in f.terms:
            w = self.term_weight(m)
            if weight is None:
                weight = w
            elif weight != w:
                return None
        return weight


def check_grading(structure: PoissonStructure, w: WeightVector):
    """None on pass; else (pair, term, got, expected) for the first entry
    that is not homogeneous of weight w_i + w_j."""
    for (i, j), value in sorted(structure.table.items()):
        wi, wj = w.weights[i], w.weights[j]
        expected = (wi[0] + wj[0], wi[1] + wj[1])
        for m in value.terms:
            got = w.term_weight(m)
            if got != expected:
                return (i, j), m, got, expected
    return None
