"""Binary value principle instances and the brute-force oracle refutation.

The instance for n variables says a weighted sum of bits is negative:

    G  = 1 + x1 + 2 x2 + ... + 2^(n-1) xn
    Fi = xi^2 - xi                          (i = 1..n)

No 0/1 point satisfies G = 0, so the axiom set {G, F1..Fn} is refutable.
The oracle refutation works over the integers and ends in the constant
(2^n)!, built from three pieces:

  * S = G - 1 takes every value 0..2^n-1 on the boolean cube, so the
    product P = prod_k (S - k) vanishes there; its multilinear reduction
    is exactly zero and the reduction ledger writes P as a combination of
    boolean-axiom multiples.
  * P - (2^n)! is divisible by S + 1 = G as a univariate polynomial in S;
    the quotient C is found by synthetic division.
  * Combining the two derivations gives P - C*G = (2^n)!.

Emission totals grow quickly (tens of thousands of lines at n = 4), so the
line sums use the builder's balanced combination tree and the generator
refuses n above a cost limit unless forced.

The audit and trace operations document why that final constant must be
huge: every prime p <= 2^n divides it.  The audit checks the divisibilities
directly; the trace fixes one prime q = k + 1, evaluates the whole proof at
the 0/1 point encoding k, and reports every line's residue mod q.  At that
point G evaluates to q and the boolean axioms to 0, so each line of an
integer-scalar proof must evaluate to a multiple of q.

Report JSON renders every integer as a decimal string; the values here
outgrow what other tooling reads back from JSON numbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .polyring import (
    FormatError,
    Monomial,
    Polynomial,
    VarId,
    as_scalar,
    boolean_axiom,
    ceil_log2,
    multilinear_reduce,
    parse_var,
    poly_from_obj,
    poly_to_obj,
    scalar_from_str,
    xvar,
)
from .proofcore import AxiomSet, ProofBuilder, ProofLine, SystemKind

COST_LIMIT = 5
SIEVE_LIMIT = 1 << 24


class CostGuard(Exception):
    """The requested instance is past the default cost limit."""


class SieveGuard(Exception):
    """The requested sieve bound is past the supported range."""


class ZeroConstant(Exception):
    """A divisibility audit was asked about the constant zero."""


class KPlusOneNotPrime(Exception):
    """The trace modulus k + 1 is composite, so residue logic breaks down."""


class NonIntegralExtensionValue(Exception):
    """A value at the trace point came out non-integral."""


@dataclass(frozen=True)
class BvpInstance:
    n: int
    equation: Polynomial
    booleans: tuple[Polynomial, ...]

    def axiom_set(self) -> AxiomSet:
        return AxiomSet(base=(self.equation,) + self.booleans)


def gen_bvp(n: int) -> BvpInstance:
    """The instance for n bits; base axiom order is [G, F1, ..., Fn]."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("n must be a positive integer")
    pairs = [(Monomial.one(), 1)]
    pairs.extend((Monomial.of(xvar(i)), 1 << (i - 1)) for i in range(1, n + 1))
    return BvpInstance(
        n=n,
        equation=Polynomial.from_terms(pairs),
        booleans=tuple(boolean_axiom(xvar(i)) for i in range(1, n + 1)),
    )


def _falling_product_coeffs(count: int) -> list[int]:
    """Coefficients of prod_{k=0}^{count-1} (T - k), lowest degree first."""
    coeffs = [1]
    for k in range(count):
        shifted = [0] + coeffs
        coeffs = [s - k * c for s, c in zip(shifted, coeffs + [0])]
    return coeffs


def _divide_by_t_plus_one(coeffs: list[int]) -> list[int]:
    """Quotient of an exact division by (T + 1), lowest degree first."""
    quotient = [0] * (len(coeffs) - 1)
    carry = coeffs[-1]
    for i in range(len(coeffs) - 2, -1, -1):
        quotient[i] = carry
        carry = coeffs[i] - carry
    if carry != 0:
        raise ArithmeticError("division by T + 1 left a remainder")
    return quotient


def _univariate_in(coeffs: Sequence[int], value: Polynomial) -> Polynomial:
    """Expand sum_i coeffs[i] * value^i."""
    total = Polynomial.zero()
    power = Polynomial.constant(1)
    for i, c in enumerate(coeffs):
        if i:
            power = power.mul(value)
        if c:
            total = total.add(power.scale(c))
    return total


class _MonomialLadder:
    """Memoized monomial-times-line derivations.

    Stripping one variable at a time keeps every intermediate product a
    real proof line, and monomials sharing a prefix in canonical variable
    order reuse those lines instead of re-deriving them.
    """

    def __init__(self, builder: ProofBuilder) -> None:
        self.builder = builder
        self.cache: dict[tuple[int, Monomial], int] = {}

    def line_for(self, source: int, mono: Monomial) -> int:
        if mono.is_one():
            return source
        key = (source, mono)
        line = self.cache.get(key)
        if line is None:
            last = mono.pairs[-1][0]
            prefix = self.line_for(source, mono.without(last))
            line = self.builder.mul_var(prefix, last)
            self.cache[key] = line
        return line


def brute_force_refutation(
    n: int, force: bool = False
) -> tuple[AxiomSet, list[ProofLine]]:
    """Refute the n-bit instance over the integers, ending in (2^n)!.

    Line counts explode with n; values past COST_LIMIT need force=True.
    """
    if n > COST_LIMIT and not force:
        raise CostGuard(
            f"n = {n} exceeds the cost limit {COST_LIMIT}; pass force to override"
        )
    instance = gen_bvp(n)
    axioms = instance.axiom_set()
    builder = ProofBuilder(axioms, SystemKind.PCSQRT_Z)

    count = 1 << n
    product_coeffs = _falling_product_coeffs(count)
    shifted = list(product_coeffs)
    shifted[0] -= math.factorial(count)
    quotient_coeffs = _divide_by_t_plus_one(shifted)

    weighted_sum = instance.equation.sub(Polynomial.constant(1))
    product_poly = _univariate_in(product_coeffs, weighted_sum)

    boolean_vars = frozenset(xvar(i) for i in range(1, n + 1))
    reduced, steps = multilinear_reduce(product_poly, boolean_vars)
    if not reduced.is_zero():
        raise ArithmeticError("the vanishing product failed to reduce to zero")

    ladder = _MonomialLadder(builder)
    vanish_parts = []
    for step in steps:
        axiom_line = builder.axiom_line(step.variable.index)
        multiple = ladder.line_for(axiom_line, step.monomial)
        if step.coefficient == 1:
            vanish_parts.append(multiple)
        else:
            vanish_parts.append(builder.scale_line(multiple, step.coefficient))
    vanish_line = builder.sum_lines(vanish_parts)

    cofactor_line = _emit_horner_times_equation(builder, n, quotient_coeffs)
    builder.lincomb(vanish_line, cofactor_line, 1, -1)
    return axioms, builder.lines


def _emit_horner_times_equation(
    builder: ProofBuilder, n: int, coeffs: list[int]
) -> int:
    """Derive (sum_i coeffs[i] * S^i) * G from the G axiom.

    Runs Horner's scheme on lines: H_top = c_top * G, then each level is
    H * S + c_i * G, with the multiplication by S = sum_j 2^(j-1) x_j spelled
    out as one variable product per bit plus a weighted combination.
    """
    equation_line = builder.axiom_line(0)
    acc = builder.scale_line(equation_line, coeffs[-1])
    for c in reversed(coeffs[:-1]):
        sliding = [builder.mul_var(acc, xvar(j)) for j in range(1, n + 1)]
        acc = sliding[0] if n == 1 else builder.lincomb(sliding[0], sliding[1], 1, 2)
        for j in range(2, n):
            acc = builder.lincomb(acc, sliding[j], 1, 1 << j)
        if c:
            acc = builder.lincomb(acc, equation_line, 1, c)
    return acc


# -- prime utilities -----------------------------------------------------------


def primes_below(bound: int) -> list[int]:
    """All primes strictly below bound; bound is capped by SIEVE_LIMIT."""
    if bound > SIEVE_LIMIT:
        raise SieveGuard(f"sieve bound {bound} exceeds the limit {SIEVE_LIMIT}")
    if bound <= 2:
        return []
    flags = bytearray([1]) * bound
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(bound - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, bound, p)))
    return [i for i in range(bound) if flags[i]]


def is_prime(m: int) -> bool:
    """Trial division; meant for the small moduli the trace uses."""
    if m < 2:
        return False
    if m < 4:
        return True
    if m % 2 == 0:
        return False
    for d in range(3, math.isqrt(m) + 1, 2):
        if m % d == 0:
            return False
    return True


def primorial_bits(bound: int) -> int:
    """ceil(log2) of the product of all primes below bound."""
    return ceil_log2(math.prod(primes_below(bound), start=1))


def factorial_bits(m: int) -> int:
    """ceil(log2 m!)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return ceil_log2(math.factorial(m))


# -- divisibility audit --------------------------------------------------------


@dataclass(frozen=True)
class AuditCheck:
    prime: int
    divides: bool


@dataclass(frozen=True)
class AuditReport:
    n: int
    constant: int
    bit_length: int
    checks: tuple[AuditCheck, ...]
    all_divide: bool


def audit_divisibility(constant: int, n: int) -> AuditReport:
    """Check the final constant against every prime p <= 2^n."""
    if not isinstance(constant, int) or isinstance(constant, bool):
        raise ValueError("the audited constant must be an integer")
    if constant == 0:
        raise ZeroConstant("the zero constant ends no refutation")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError("n must be a positive integer")
    magnitude = abs(constant)
    checks = tuple(
        AuditCheck(p, magnitude % p == 0) for p in primes_below((1 << n) + 1)
    )
    return AuditReport(
        n=n,
        constant=constant,
        bit_length=ceil_log2(magnitude),
        checks=checks,
        all_divide=all(c.divides for c in checks),
    )


# -- residue trace -------------------------------------------------------------


@dataclass(frozen=True)
class TraceReport:
    n: int
    k: int
    modulus: int
    assignment: tuple[tuple[VarId, int], ...]
    extension_values: tuple[tuple[VarId, int], ...]
    residues: tuple[int, ...]
    all_zero: bool


def _integral(value, what: str) -> int:
    value = as_scalar(value)
    if isinstance(value, Fraction):
        raise NonIntegralExtensionValue(f"{what} evaluates to the non-integer {value}")
    return value


def trace_mod_check(
    axioms: AxiomSet, proof: Sequence[ProofLine], n: int, k: int
) -> TraceReport:
    """Evaluate a refutation of the n-bit instance at the point encoding k.

    Requires the prime modulus q = k + 1 and the exact generated base; the
    caller is expected to have checked the proof already.  Each line's value
    at the point is reported mod q, and for integer-scalar proofs they are
    all zero, which is the per-prime certificate behind the audit.
    """
    if not 0 <= k < (1 << n):
        raise ValueError(f"k must lie in [0, 2^{n})")
    modulus = k + 1
    if not is_prime(modulus):
        raise KPlusOneNotPrime(f"k + 1 = {modulus} is not prime")
    if axioms.base != gen_bvp(n).axiom_set().base:
        raise ValueError("the base axioms are not the generated instance")

    assignment: dict[VarId, int] = {
        xvar(i): (k >> (i - 1)) & 1 for i in range(1, n + 1)
    }
    extension_values = []
    for extension in axioms.extensions:
        value = _integral(
            extension.definition.evaluate(assignment), extension.var.name
        )
        assignment[extension.var] = value
        extension_values.append((extension.var, value))

    residues = tuple(
        _integral(line.poly.evaluate(assignment), f"line {index}") % modulus
        for index, line in enumerate(proof)
    )
    return TraceReport(
        n=n,
        k=k,
        modulus=modulus,
        assignment=tuple(
            sorted((v, b) for v, b in assignment.items() if v.kind == "x")
        ),
        extension_values=tuple(extension_values),
        residues=residues,
        all_zero=all(r == 0 for r in residues),
    )


# -- serialization -------------------------------------------------------------


def instance_to_obj(instance: BvpInstance) -> dict[str, object]:
    return {
        "n": instance.n,
        "base": [poly_to_obj(p) for p in (instance.equation,) + instance.booleans],
    }


def instance_from_obj(obj: object) -> BvpInstance:
    if not isinstance(obj, dict) or set(obj) != {"n", "base"}:
        raise FormatError("instance must have exactly 'n' and 'base'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError("'n' must be a positive integer")
    base = obj["base"]
    if not isinstance(base, list) or len(base) != n + 1:
        raise FormatError("'base' must list the equation and n boolean axioms")
    polys = [poly_from_obj(p) for p in base]
    instance = gen_bvp(n)
    if tuple(polys) != (instance.equation,) + instance.booleans:
        raise FormatError("'base' does not match the generated instance")
    return instance


def audit_report_to_obj(report: AuditReport) -> dict[str, object]:
    return {
        "n": str(report.n),
        "constant": str(report.constant),
        "bit_length": str(report.bit_length),
        "checks": [
            {"prime": str(c.prime), "divides": c.divides} for c in report.checks
        ],
        "all_divide": report.all_divide,
    }


def trace_report_to_obj(report: TraceReport) -> dict[str, object]:
    return {
        "n": str(report.n),
        "k": str(report.k),
        "modulus": str(report.modulus),
        "assignment": {v.name: str(b) for v, b in report.assignment},
        "extension_values": {v.name: str(b) for v, b in report.extension_values},
        "residues": [str(r) for r in report.residues],
        "all_zero": report.all_zero,
    }


def _int_from_str(value: object, what: str) -> int:
    scalar = scalar_from_str(value)  # type: ignore[arg-type]
    if isinstance(scalar, Fraction):
        raise FormatError(f"'{what}' must be an integer string, got {value!r}")
    return scalar


def _bool_field(value: object, what: str) -> bool:
    if not isinstance(value, bool):
        raise FormatError(f"'{what}' must be a boolean")
    return value


def _var_values(obj: object, what: str) -> tuple[tuple[VarId, int], ...]:
    if not isinstance(obj, dict):
        raise FormatError(f"'{what}' must be an object")
    pairs = [(parse_var(name), _int_from_str(v, what)) for name, v in obj.items()]
    pairs.sort(key=lambda pair: pair[0])
    return tuple(pairs)


def audit_report_from_obj(obj: object) -> AuditReport:
    fields = {"n", "constant", "bit_length", "checks", "all_divide"}
    if not isinstance(obj, dict) or set(obj) != fields:
        raise FormatError(f"audit report must have exactly the fields {sorted(fields)}")
    checks_obj = obj["checks"]
    if not isinstance(checks_obj, list):
        raise FormatError("'checks' must be a list")
    checks = []
    for entry in checks_obj:
        if not isinstance(entry, dict) or set(entry) != {"prime", "divides"}:
            raise FormatError("each check must have exactly 'prime' and 'divides'")
        checks.append(
            AuditCheck(
                prime=_int_from_str(entry["prime"], "prime"),
                divides=_bool_field(entry["divides"], "divides"),
            )
        )
    return AuditReport(
        n=_int_from_str(obj["n"], "n"),
        constant=_int_from_str(obj["constant"], "constant"),
        bit_length=_int_from_str(obj["bit_length"], "bit_length"),
        checks=tuple(checks),
        all_divide=_bool_field(obj["all_divide"], "all_divide"),
    )


def trace_report_from_obj(obj: object) -> TraceReport:
    fields = {"n", "k", "modulus", "assignment", "extension_values", "residues", "all_zero"}
    if not isinstance(obj, dict) or set(obj) != fields:
        raise FormatError(f"trace report must have exactly the fields {sorted(fields)}")
    residues_obj = obj["residues"]
    if not isinstance(residues_obj, list):
        raise FormatError("'residues' must be a list")
    return TraceReport(
        n=_int_from_str(obj["n"], "n"),
        k=_int_from_str(obj["k"], "k"),
        modulus=_int_from_str(obj["modulus"], "modulus"),
        assignment=_var_values(obj["assignment"], "assignment"),
        extension_values=_var_values(obj["extension_values"], "extension_values"),
        residues=tuple(_int_from_str(r, "residues") for r in residues_obj),
        all_zero=_bool_field(obj["all_zero"], "all_zero"),
    )
