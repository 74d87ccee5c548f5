"""Translations between proof formats.

Two translators live here.

simulate_reslin_b turns a linear-resolution refutation into an extended
square-root refutation over the rationals.  Every affine form that occurs
anywhere gets an extension variable (the registry), a disjunction becomes
the product of its disjuncts' variables, and each resolution rule is
replayed as a short derivation on those products.  The square root rule is
used by exactly one case, contraction, which turns the product with a
repeated variable into a perfect square first.

rationalize turns a refutation over the rationals into one over the
integers.  It is organized in phases:

  phase 0   picks integer multipliers: T_i rescales extension i so its
            definition clears every denominator, and per-line clearing
            constants L_k are precomputed from the linear-combination
            denominators (deltas).
  phase 1   substitutes y_i -> y_i / T_i throughout and tracks, per line,
            whether the result is the plain substituted polynomial
            (Unscaled) or T_j times it (Scaled(j)).  All auxiliary lines
            this introduces are pure 1/T_j rescalings.
  phase 2   multiplies the whole proof by a running integer factor F that
            grows whenever a rational scalar or a rational square root
            needs clearing; every earlier line is re-emitted at the new
            factor so the invariant "stored line = F times its phase-1
            polynomial" holds throughout.  All coefficients stay integral
            by construction.

The final integer constant is the original one times F and the scale tag
of the last line, so the ratio between output and input constants is a
positive integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .polyring import (
    Monomial,
    Polynomial,
    Scalar,
    VarId,
    as_scalar,
    boolean_axiom,
    yvar,
)
from .proofcore import (
    Axiom,
    AxiomSet,
    ExtensionAxiom,
    LinComb,
    MulVar,
    ProofBuilder,
    ProofLine,
    Sqrt,
    StepRule,
    SystemKind,
    check_refutation,
    emit_monomial_multiple,
)
from .reslin import (
    Disjunction,
    LinEq,
    RlAxiom,
    RlBooleanAxiom,
    RlContraction,
    RlLine,
    RlResolution,
    RlSimplification,
    RlWeakening,
    build_registry,
    check_reslin,
    is_refutation,
    product_monomial,
)


class InvalidInputProof(Exception):
    """The proof handed to a translator does not check out."""


class InternalCheckFailure(Exception):
    """A translator produced output that fails its own verification."""


class NonIntegerBaseAxiom(Exception):
    """Rationalization needs the base axioms to be integral already."""


# -- linear resolution into extended square-root refutations --------------------


@dataclass(frozen=True)
class SimulationOutput:
    axioms: AxiomSet
    proof: tuple[ProofLine, ...]
    line_map: tuple[int, ...]


def simulate_reslin_b(
    axioms: Sequence[Disjunction], proof: Sequence[RlLine]
) -> SimulationOutput:
    """Translate a linear-resolution refutation into product form.

    The output refutes the hat products of the input axioms together with
    one boolean axiom per mentioned x-variable, over the rational extended
    square-root system, and ends in the constant 1.  line_map[i] is the
    output line whose polynomial is the hat of input line i.
    """
    report = check_reslin(axioms, proof)
    if not report.valid:
        raise InvalidInputProof(f"input fails at line {report.error.line}: "
                                f"{report.error.code}")
    if not is_refutation(proof):
        raise InvalidInputProof("input does not end in the empty disjunction")

    registry = build_registry(axioms, proof)
    mentioned: set[VarId] = set()
    for disjunction in list(axioms) + [line.disjunction for line in proof]:
        for eq in disjunction.disjuncts:
            mentioned.update(v for v, _ in eq.coeffs)
    xvars = sorted(mentioned)

    base = tuple(
        Polynomial(((product_monomial(d, registry), 1),)) for d in axioms
    ) + tuple(boolean_axiom(v) for v in xvars)
    out_axioms = AxiomSet(base=base, extensions=registry.definitions())
    builder = ProofBuilder(out_axioms, SystemKind.EXTPCSQRT_Q)
    boolean_index = {v: len(axioms) + i for i, v in enumerate(xvars)}

    hat_lines: list[int] = []
    for line in proof:
        rule = line.rule
        if isinstance(rule, RlAxiom):
            emitted = builder.axiom_line(rule.index)
        elif isinstance(rule, RlBooleanAxiom):
            emitted = _simulate_boolean(builder, registry, boolean_index, rule)
        elif isinstance(rule, RlResolution):
            emitted = _simulate_resolution(builder, registry, proof, hat_lines, rule)
        elif isinstance(rule, RlWeakening):
            emitted = builder.mul_var(
                hat_lines[rule.j], registry.lookup(rule.eq)
            )
        elif isinstance(rule, RlSimplification):
            emitted = _simulate_simplification(
                builder, registry, proof, hat_lines, rule
            )
        else:
            emitted = _simulate_contraction(builder, registry, proof, hat_lines, rule)
        expected = Polynomial(((product_monomial(line.disjunction, registry), 1),))
        if builder.poly_at(emitted) != expected:
            raise InternalCheckFailure(
                f"simulated line does not match its hat product"
            )
        hat_lines.append(emitted)

    final = check_refutation(out_axioms, builder.lines, SystemKind.EXTPCSQRT_Q)
    if not final.valid or final.final_constant != 1:
        raise InternalCheckFailure("the simulated refutation fails to check")
    return SimulationOutput(
        axioms=out_axioms,
        proof=tuple(builder.lines),
        line_map=tuple(hat_lines),
    )


def _simulate_boolean(builder, registry, boolean_index, rule) -> int:
    """Derive ya*yb from v^2 - v, for ya := v and yb := v - 1."""
    v = rule.var
    var_a = registry.lookup(LinEq.of({v: 1}, 0))
    var_b = registry.lookup(LinEq.of({v: 1}, 1))
    square = builder.axiom_line(boolean_index[v])
    def_a = builder.extension_line(var_a)
    def_b = builder.extension_line(var_b)
    v_def_a = builder.mul_var(def_a, v)
    shifted = builder.lincomb(v_def_a, def_a, 1, -1)
    cross = builder.mul_var(def_b, var_a)
    partial = builder.lincomb(square, shifted, 1, 1)
    return builder.lincomb(partial, cross, 1, 1)


def _simulate_resolution(builder, registry, proof, hat_lines, rule) -> int:
    """Combine two product lines through the resolved forms' definitions."""
    prem_a = proof[rule.j].disjunction
    prem_b = proof[rule.k].disjunction
    eq_a = prem_a.disjuncts[rule.dj]
    eq_b = prem_b.disjuncts[rule.dk]
    rest_a = product_monomial(prem_a.without(rule.dj), registry)
    rest_b = product_monomial(prem_b.without(rule.dk), registry)
    combined = eq_a.combine(eq_b, rule.alpha, rule.beta)

    lifted_a = emit_monomial_multiple(builder, hat_lines[rule.j], rest_b, 1)
    lifted_b = emit_monomial_multiple(builder, hat_lines[rule.k], rest_a, 1)
    def_new = builder.extension_line(registry.lookup(combined))
    partial = builder.lincomb(
        def_new, builder.extension_line(registry.lookup(eq_a)), 1, -rule.alpha
    )
    swap = builder.lincomb(
        partial, builder.extension_line(registry.lookup(eq_b)), 1, -rule.beta
    )
    swap_lifted = emit_monomial_multiple(builder, swap, rest_a.times(rest_b), 1)
    mixed = builder.lincomb(lifted_a, lifted_b, rule.alpha, rule.beta)
    return builder.lincomb(mixed, swap_lifted, 1, 1)


def _simulate_simplification(builder, registry, proof, hat_lines, rule) -> int:
    """Strip a false constant disjunct by dividing its definition out."""
    premise = proof[rule.j].disjunction
    constant = premise.disjuncts[rule.d].constant
    rest = product_monomial(premise.without(rule.d), registry)
    def_line = builder.extension_line(
        registry.lookup(premise.disjuncts[rule.d])
    )
    lifted = emit_monomial_multiple(builder, def_line, rest, 1)
    difference = builder.lincomb(lifted, hat_lines[rule.j], 1, -1)
    return builder.scale_line(difference, Fraction(1, constant))


def _simulate_contraction(builder, registry, proof, hat_lines, rule) -> int:
    """Square the product over the tail, then take the square root."""
    premise = proof[rule.j].disjunction
    repeated = registry.lookup(premise.disjuncts[rule.d1])
    tail = product_monomial(premise.without(rule.d1, rule.d2), registry)
    squared = emit_monomial_multiple(builder, hat_lines[rule.j], tail, 1)
    root = Polynomial(((tail.times_var(repeated), 1),))
    return builder.sqrt_of(squared, root)


# -- rationalization of proofs over the rationals --------------------------------


@dataclass(frozen=True)
class PhaseOneLine:
    poly: Polynomial
    rule: StepRule
    provenance: Optional[int]
    scale_tag: Optional[int]


@dataclass(frozen=True)
class RationalizeState:
    denominator_products: tuple[int, ...]
    scale_factors: tuple[int, ...]
    deltas: tuple[int, ...]
    line_clearers: tuple[int, ...]
    final_factor: int
    final_constant: int


@dataclass(frozen=True)
class RationalizeResult:
    axioms: AxiomSet
    proof: tuple[ProofLine, ...]
    phase_one: tuple[PhaseOneLine, ...]
    prime_of: tuple[int, ...]
    state: RationalizeState


def _max_degree_of(poly: Polynomial, var: VarId) -> int:
    return max((mono.exponent(var) for mono, _ in poly.terms()), default=0)


def _scalar_denominator(value: Scalar) -> int:
    value = as_scalar(value)
    return value.denominator if isinstance(value, Fraction) else 1


def compute_scale_factors(axioms: AxiomSet) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Phase 0 for extensions: (M_i, T_i) per extension, in order.

    M_i is the product of the denominators in definition i, and
    T_i = M_i * prod_j T_j^(max degree of y_j in definition i).
    """
    products: list[int] = []
    factors: list[int] = []
    for i, extension in enumerate(axioms.extensions):
        definition = extension.definition
        m = definition.denominator_product()
        t = m
        for j in range(i):
            exponent = _max_degree_of(definition, yvar(j + 1))
            t *= factors[j] ** exponent
        products.append(m)
        factors.append(t)
    return tuple(products), tuple(factors)


def _collect_deltas(proof: Sequence[ProofLine]) -> tuple[int, ...]:
    deltas = {1}
    for line in proof:
        if isinstance(line.rule, LinComb):
            deltas.add(_scalar_denominator(line.rule.alpha))
            deltas.add(_scalar_denominator(line.rule.beta))
    return tuple(sorted(deltas))


def rationalize(
    axioms: AxiomSet,
    proof: Sequence[ProofLine],
    faithful_constants: bool = False,
) -> RationalizeResult:
    """Lift a rational refutation of integer base axioms to the integers.

    The output shares the base axioms, rescales each extension definition
    to integer coefficients, and multiplies the refutation through by a
    positive integer, so its final constant is the original times that
    integer.  faithful_constants switches the square-root clearing factor
    from the least common denominator to the precomputed per-line product,
    which is larger but independent of the actual polynomial.
    """
    for base in axioms.base:
        if not base.is_integral():
            raise NonIntegerBaseAxiom(f"base axiom {base} has rational coefficients")
    report = check_refutation(axioms, proof, SystemKind.EXTPCSQRT_Q)
    if not report.valid:
        raise InvalidInputProof(
            f"input fails at line {report.error.line}: {report.error.code}"
        )

    products, factors = compute_scale_factors(axioms)
    deltas = _collect_deltas(proof)
    spread = math.prod(deltas)
    clearers = tuple(spread ** (k + 1) for k in range(len(proof)))

    new_axioms, phase_one, prime_of = _phase_one(axioms, proof, factors)
    phase_proof = [ProofLine(line.poly, line.rule) for line in phase_one]
    middle = check_refutation(new_axioms, phase_proof, SystemKind.EXTPCSQRT_Q)
    if not middle.valid:
        raise InternalCheckFailure(
            f"phase 1 fails at line {middle.error.line}: {middle.error.code}"
        )

    z_proof, final_factor = _phase_two(
        new_axioms, phase_one, prime_of, proof, clearers, factors, faithful_constants
    )
    final = check_refutation(new_axioms, z_proof, SystemKind.EXTPCSQRT_Z)
    if not final.valid:
        raise InternalCheckFailure(
            f"phase 2 fails at line {final.error.line}: {final.error.code}"
        )
    ratio = Fraction(final.final_constant) / Fraction(report.final_constant)
    if ratio <= 0 or ratio.denominator != 1:
        raise InternalCheckFailure(f"constant ratio {ratio} is not a positive integer")

    return RationalizeResult(
        axioms=new_axioms,
        proof=tuple(z_proof),
        phase_one=tuple(phase_one),
        prime_of=tuple(prime_of),
        state=RationalizeState(
            denominator_products=products,
            scale_factors=factors,
            deltas=deltas,
            line_clearers=clearers,
            final_factor=final_factor,
            final_constant=final.final_constant,
        ),
    )


def _phase_one(
    axioms: AxiomSet, proof: Sequence[ProofLine], factors: tuple[int, ...]
) -> tuple[AxiomSet, list[PhaseOneLine], list[int]]:
    substitution = {
        yvar(i + 1): Polynomial.variable(yvar(i + 1)).scale(Fraction(1, factors[i]))
        for i in range(len(factors))
    }
    new_extensions = tuple(
        ExtensionAxiom(
            extension.var,
            extension.definition.substitute(substitution).scale(factors[i]),
        )
        for i, extension in enumerate(axioms.extensions)
    )
    new_axioms = AxiomSet(base=axioms.base, extensions=new_extensions)

    lines: list[PhaseOneLine] = []
    prime_of: list[int] = []

    def push(
        poly: Polynomial, rule: StepRule, provenance: Optional[int], tag: Optional[int]
    ) -> int:
        lines.append(PhaseOneLine(poly, rule, provenance, tag))
        return len(lines) - 1

    def unscaled(index: int) -> int:
        """A copy of phase-1 line index with its scale tag divided away."""
        tag = lines[index].scale_tag
        if tag is None:
            return index
        reciprocal = Fraction(1, factors[tag - 1])
        return push(
            lines[index].poly.scale(reciprocal),
            LinComb(index, index, reciprocal, 0),
            None,
            None,
        )

    for k, line in enumerate(proof):
        rule = line.rule
        if isinstance(rule, Axiom):
            if rule.index < len(axioms.base):
                target = push(line.poly, rule, k, None)
            else:
                e = rule.index - len(axioms.base)
                target = push(new_extensions[e].polynomial, rule, k, e + 1)
        elif isinstance(rule, MulVar):
            premise = prime_of[rule.k]
            if rule.var.kind == "x":
                target = push(
                    lines[premise].poly.mul_var(rule.var),
                    MulVar(premise, rule.var),
                    k,
                    lines[premise].scale_tag,
                )
            else:
                source = unscaled(premise)
                target = push(
                    lines[source].poly.mul_var(rule.var),
                    MulVar(source, rule.var),
                    k,
                    rule.var.index,
                )
        elif isinstance(rule, LinComb):
            left, right = prime_of[rule.j], prime_of[rule.k]
            if lines[left].scale_tag != lines[right].scale_tag:
                left, right = unscaled(left), unscaled(right)
            combined = lines[left].poly.scale(rule.alpha).add(
                lines[right].poly.scale(rule.beta)
            )
            target = push(
                combined,
                LinComb(left, right, rule.alpha, rule.beta),
                k,
                lines[left].scale_tag,
            )
        else:
            source = unscaled(prime_of[rule.k])
            root = line.poly.substitute(substitution)
            target = push(root, Sqrt(source), k, None)
        prime_of.append(target)
    return new_axioms, lines, prime_of


def _phase_two(
    new_axioms: AxiomSet,
    phase_one: Sequence[PhaseOneLine],
    prime_of: Sequence[int],
    original: Sequence[ProofLine],
    clearers: tuple[int, ...],
    factors: tuple[int, ...],
    faithful_constants: bool,
) -> tuple[list[ProofLine], int]:
    builder = ProofBuilder(new_axioms, SystemKind.EXTPCSQRT_Z)
    factor = 1
    located: dict[int, int] = {}

    def bump(multiplier: int, fresh: int) -> None:
        """Raise the global factor, re-emitting every line but the fresh one."""
        nonlocal factor
        factor *= multiplier
        for index in sorted(located):
            if located[index] != fresh:
                located[index] = builder.scale_line(located[index], multiplier)

    for p, line in enumerate(phase_one):
        rule = line.rule
        if isinstance(rule, Axiom):
            emitted = builder.axiom_line(rule.index)
            if factor != 1:
                emitted = builder.scale_line(emitted, factor)
        elif isinstance(rule, MulVar):
            emitted = builder.mul_var(located[rule.k], rule.var)
        elif isinstance(rule, LinComb):
            alpha, beta = as_scalar(rule.alpha), as_scalar(rule.beta)
            d1, d2 = _scalar_denominator(alpha), _scalar_denominator(beta)
            multiplier = d1 * d2
            emitted = builder.lincomb(
                located[rule.j], located[rule.k], alpha * multiplier, beta * multiplier
            )
            if multiplier != 1:
                bump(multiplier, emitted)
        else:
            root = line.poly
            if faithful_constants:
                origin = line.provenance
                clearing = clearers[origin]
                for j in range(len(factors)):
                    clearing *= factors[j] ** _max_degree_of(
                        original[origin].poly, yvar(j + 1)
                    )
                if clearing % root.denominator_lcm() != 0:
                    raise InternalCheckFailure(
                        "the per-line clearing constant misses a denominator"
                    )
            else:
                clearing = root.denominator_lcm()
            squared = builder.scale_line(located[rule.k], factor * clearing**2)
            emitted = builder.sqrt_of(squared, root.scale(factor * clearing))
            if clearing != 1:
                bump(clearing, emitted)
        located[p] = emitted

    last = located[len(phase_one) - 1]
    if last != len(builder.lines) - 1:
        builder.scale_line(last, 1)
    return builder.lines, factor


def verify_phase_one(
    axioms: AxiomSet, proof: Sequence[ProofLine], result: RationalizeResult
) -> None:
    """Re-derive phase 1 from first principles and compare.

    Checks the substitution identity for every line that realizes an input
    line, and that every linear combination either reuses the original
    scalars or is a pure 1/T_j rescaling.  Raises InternalCheckFailure on
    the first violation.
    """
    factors = result.state.scale_factors
    substitution = {
        yvar(i + 1): Polynomial.variable(yvar(i + 1)).scale(Fraction(1, factors[i]))
        for i in range(len(factors))
    }
    reciprocals = {Fraction(1, t) for t in factors}

    for k, line in enumerate(proof):
        image = result.phase_one[result.prime_of[k]]
        expected = line.poly.substitute(substitution)
        if image.scale_tag is not None:
            expected = expected.scale(factors[image.scale_tag - 1])
        if image.poly != expected:
            raise InternalCheckFailure(
                f"line {k} breaks the substitution identity"
            )

    for index, line in enumerate(result.phase_one):
        if not isinstance(line.rule, LinComb):
            continue
        if line.provenance is None:
            alpha, beta = as_scalar(line.rule.alpha), as_scalar(line.rule.beta)
            if beta != 0 or alpha not in reciprocals:
                raise InternalCheckFailure(
                    f"auxiliary line {index} is not a pure rescaling"
                )
        else:
            origin = proof[line.provenance].rule
            if not isinstance(origin, LinComb) or (
                as_scalar(origin.alpha),
                as_scalar(origin.beta),
            ) != (as_scalar(line.rule.alpha), as_scalar(line.rule.beta)):
                raise InternalCheckFailure(
                    f"line {index} does not reuse the original scalars"
                )


def state_to_obj(state: RationalizeState) -> dict[str, object]:
    return {
        "M": [str(m) for m in state.denominator_products],
        "T": [str(t) for t in state.scale_factors],
        "deltas": [str(d) for d in state.deltas],
        "L": [str(c) for c in state.line_clearers],
        "F_final": str(state.final_factor),
        "final_constant": str(state.final_constant),
    }
