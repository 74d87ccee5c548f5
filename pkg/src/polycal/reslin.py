"""Resolution over integer linear equations.

Lines are disjunctions of equations ``a . x = a0`` with integer
coefficients over x-variables.  Positions inside a disjunction are kept
(rules cite disjuncts by position) but the checker compares disjunctions as
multisets, so permuting disjuncts never changes a verdict.

Rules:

  RlAxiom(i)                       copy of the i-th input disjunction
  RlBooleanAxiom(v)                (v = 0) or (v = 1)
  RlResolution(j,k,dj,dk,a,b)      resolve line j's disjunct dj with line
                                   k's disjunct dk into a*L1 + b*L2
                                   (integer a, b; combined coefficientwise
                                   including the constant)
  RlWeakening(j, eq)               append one more disjunct
  RlSimplification(j, d)           drop disjunct d, a constant equation
                                   0 = c with c != 0
  RlContraction(j, d1, d2)         drop one of two equal disjuncts

A refutation ends in the empty disjunction.  The size measures count only
variable coefficients, never the constant terms: unary size sums |a_i|,
binary size sums ceil(log2 |a_i|).

The registry maps each distinct affine form ``a . x - a0`` seen anywhere in
the axioms or the proof to a fresh y-variable, in first-occurrence order;
`hat` rewrites a disjunction as the product of its disjuncts' y-variables
(the empty disjunction becomes the constant 1).  Keys are the exact
coefficient tuples: no gcd or sign normalization, so (x=0) and (2x=0) get
distinct variables.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from .polyring import (
    FormatError,
    Monomial,
    Polynomial,
    Scalar,
    VarId,
    as_scalar,
    ceil_log2,
    parse_var,
    xvar,
    yvar,
)
from .proofcore import CheckError, CheckReport, ExtensionAxiom

AffineKey = tuple[tuple[tuple[VarId, int], ...], int]


@dataclass(frozen=True)
class LinEq:
    """An equation sum(coeffs) = constant over x-variables; zero coeffs dropped."""

    coeffs: tuple[tuple[VarId, int], ...]
    constant: int

    @staticmethod
    def of(coeffs: Mapping[VarId, int] | Iterable[tuple[VarId, int]], constant: int) -> LinEq:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        merged: dict[VarId, int] = {}
        for var, value in items:
            if var.kind != "x":
                raise ValueError(f"linear equations range over x-variables, got {var.name}")
            if not isinstance(value, int) or isinstance(value, bool):
                raise ValueError(f"coefficient of {var.name} must be an integer")
            merged[var] = merged.get(var, 0) + value
        if not isinstance(constant, int) or isinstance(constant, bool):
            raise ValueError("constant term must be an integer")
        return LinEq(
            tuple(sorted((v, c) for v, c in merged.items() if c != 0)), constant
        )

    def combine(self, other: LinEq, alpha: int, beta: int) -> LinEq:
        merged = {v: alpha * c for v, c in self.coeffs}
        for v, c in other.coeffs:
            merged[v] = merged.get(v, 0) + beta * c
        return LinEq.of(merged, alpha * self.constant + beta * other.constant)

    def is_constant(self) -> bool:
        return not self.coeffs

    def canonical_form(self) -> AffineKey:
        """Exact key of the affine form a.x - a0: (coefficients, -constant)."""
        return (self.coeffs, -self.constant)

    def affine_polynomial(self) -> Polynomial:
        """The affine form a.x - a0 as a polynomial."""
        pairs = [(Monomial.of(v), c) for v, c in self.coeffs]
        pairs.append((Monomial.one(), -self.constant))
        return Polynomial(pairs)

    def holds(self, assignment: Mapping[VarId, int]) -> bool:
        return sum(c * assignment[v] for v, c in self.coeffs) == self.constant

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"(0 = {self.constant})"
        body = " + ".join(
            v.name if c == 1 else f"{c}*{v.name}" for v, c in self.coeffs
        )
        return f"({body} = {self.constant})"


@dataclass(frozen=True)
class Disjunction:
    disjuncts: tuple[LinEq, ...]

    @staticmethod
    def of(*eqs: LinEq) -> Disjunction:
        return Disjunction(tuple(eqs))

    @staticmethod
    def empty() -> Disjunction:
        return Disjunction(())

    def is_empty(self) -> bool:
        return not self.disjuncts

    def __len__(self) -> int:
        return len(self.disjuncts)

    def multiset(self) -> Counter:
        return Counter(self.disjuncts)

    def without(self, *positions: int) -> Disjunction:
        drop = set(positions)
        return Disjunction(
            tuple(eq for i, eq in enumerate(self.disjuncts) if i not in drop)
        )

    def appended(self, eq: LinEq) -> Disjunction:
        return Disjunction(self.disjuncts + (eq,))

    def holds(self, assignment: Mapping[VarId, int]) -> bool:
        return any(eq.holds(assignment) for eq in self.disjuncts)

    def __repr__(self) -> str:
        if not self.disjuncts:
            return "(empty)"
        return " v ".join(repr(eq) for eq in self.disjuncts)


@dataclass(frozen=True)
class RlAxiom:
    index: int


@dataclass(frozen=True)
class RlBooleanAxiom:
    var: VarId


@dataclass(frozen=True)
class RlResolution:
    j: int
    k: int
    dj: int
    dk: int
    alpha: Scalar
    beta: Scalar


@dataclass(frozen=True)
class RlWeakening:
    j: int
    eq: LinEq


@dataclass(frozen=True)
class RlSimplification:
    j: int
    d: int


@dataclass(frozen=True)
class RlContraction:
    j: int
    d1: int
    d2: int


RlRule = Union[
    RlAxiom, RlBooleanAxiom, RlResolution, RlWeakening, RlSimplification, RlContraction
]


@dataclass(frozen=True)
class RlLine:
    disjunction: Disjunction
    rule: RlRule


def boolean_disjunction(var: VarId) -> Disjunction:
    return Disjunction.of(LinEq.of({var: 1}, 0), LinEq.of({var: 1}, 1))


def _verify_rl_line(
    axioms: Sequence[Disjunction],
    lines: Sequence[RlLine],
    index: int,
    line: RlLine,
) -> Optional[CheckError]:
    def fail(code: str, message: str) -> CheckError:
        return CheckError(index, code, message)

    def premise(j: int) -> Optional[Disjunction]:
        return lines[j].disjunction if 0 <= j < index else None

    rule = line.rule
    claimed = line.disjunction.multiset()
    if isinstance(rule, RlAxiom):
        if not 0 <= rule.index < len(axioms):
            return fail("BadIndex", f"axiom index {rule.index} out of range")
        if claimed != axioms[rule.index].multiset():
            return fail("RuleMismatch", f"line {index} does not match axiom {rule.index}")
        return None
    if isinstance(rule, RlBooleanAxiom):
        if claimed != boolean_disjunction(rule.var).multiset():
            return fail(
                "RuleMismatch",
                f"line {index} is not the boolean axiom for {rule.var.name}",
            )
        return None
    if isinstance(rule, RlResolution):
        dj_prem, dk_prem = premise(rule.j), premise(rule.k)
        if dj_prem is None or dk_prem is None:
            return fail("BadIndex", f"resolution cites lines {rule.j},{rule.k}")
        if not 0 <= rule.dj < len(dj_prem) or not 0 <= rule.dk < len(dk_prem):
            return fail("BadPosition", "resolution position out of range")
        alpha, beta = as_scalar(rule.alpha), as_scalar(rule.beta)
        if isinstance(alpha, Fraction) or isinstance(beta, Fraction):
            return fail("NonIntegerScalar", "resolution scalars must be integers")
        combined = dj_prem.disjuncts[rule.dj].combine(
            dk_prem.disjuncts[rule.dk], alpha, beta
        )
        expected = (
            dj_prem.without(rule.dj).multiset()
            + dk_prem.without(rule.dk).multiset()
            + Counter([combined])
        )
        if claimed != expected:
            return fail("RuleMismatch", f"line {index} is not the stated resolvent")
        return None
    if isinstance(rule, RlWeakening):
        prem = premise(rule.j)
        if prem is None:
            return fail("BadIndex", f"weakening cites line {rule.j}")
        if claimed != prem.multiset() + Counter([rule.eq]):
            return fail("RuleMismatch", f"line {index} is not the stated weakening")
        return None
    if isinstance(rule, RlSimplification):
        prem = premise(rule.j)
        if prem is None:
            return fail("BadIndex", f"simplification cites line {rule.j}")
        if not 0 <= rule.d < len(prem):
            return fail("BadPosition", "simplification position out of range")
        target = prem.disjuncts[rule.d]
        if not target.is_constant():
            return fail(
                "RuleMismatch", "simplification target is not a constant equation"
            )
        if target.constant == 0:
            return fail(
                "SimplificationOnZero", "cannot simplify the true equation 0 = 0"
            )
        if claimed != prem.without(rule.d).multiset():
            return fail("RuleMismatch", f"line {index} is not the simplified premise")
        return None
    if isinstance(rule, RlContraction):
        prem = premise(rule.j)
        if prem is None:
            return fail("BadIndex", f"contraction cites line {rule.j}")
        if (
            not 0 <= rule.d1 < len(prem)
            or not 0 <= rule.d2 < len(prem)
            or rule.d1 == rule.d2
        ):
            return fail("BadPosition", "contraction needs two distinct positions")
        if prem.disjuncts[rule.d1] != prem.disjuncts[rule.d2]:
            return fail("ContractionUnequal", "contraction targets differ")
        if claimed != prem.without(rule.d2).multiset():
            return fail("RuleMismatch", f"line {index} is not the contracted premise")
        return None
    raise TypeError(f"unknown rule {rule!r}")


def check_rl_step(
    axioms: Sequence[Disjunction], prefix: Sequence[RlLine], line: RlLine
) -> Optional[CheckError]:
    """Verify one line against an already-checked prefix."""
    return _verify_rl_line(axioms, list(prefix) + [line], len(prefix), line)


def check_reslin(axioms: Sequence[Disjunction], proof: Sequence[RlLine]) -> CheckReport:
    """Validate a derivation; degree/final_constant do not apply here."""
    if not proof:
        raise ValueError("a proof needs at least one line")
    error = None
    for index, line in enumerate(proof):
        error = _verify_rl_line(axioms, proof, index, line)
        if error is not None:
            break
    return CheckReport(
        valid=error is None,
        error=error,
        final_constant=None,
        total_size=size_binary(proof),
        degree=-1,
        line_count=len(proof),
    )


def is_refutation(proof: Sequence[RlLine]) -> bool:
    return bool(proof) and proof[-1].disjunction.is_empty()


def size_unary(proof: Sequence[RlLine]) -> int:
    """Sum of |coefficient| over all variable coefficients in the proof."""
    return sum(
        abs(c)
        for line in proof
        for eq in line.disjunction.disjuncts
        for _, c in eq.coeffs
    )


def size_binary(proof: Sequence[RlLine]) -> int:
    """Sum of ceil(log2 |coefficient|); constants are not counted."""
    return sum(
        ceil_log2(abs(c))
        for line in proof
        for eq in line.disjunction.disjuncts
        for _, c in eq.coeffs
    )


class UnregisteredForm(KeyError):
    """An affine form was looked up that the registry has never seen."""


class Registry:
    """First-occurrence numbering of affine forms by exact canonical key."""

    def __init__(self) -> None:
        self._by_key: dict[AffineKey, VarId] = {}
        self._defs: list[ExtensionAxiom] = []

    def intern(self, eq: LinEq) -> VarId:
        key = eq.canonical_form()
        got = self._by_key.get(key)
        if got is None:
            got = yvar(len(self._by_key) + 1)
            self._by_key[key] = got
            self._defs.append(ExtensionAxiom(got, eq.affine_polynomial()))
        return got

    def lookup(self, eq: LinEq) -> VarId:
        key = eq.canonical_form()
        got = self._by_key.get(key)
        if got is None:
            raise UnregisteredForm(f"form {key!r} is not registered")
        return got

    def items(self) -> list[tuple[AffineKey, VarId]]:
        return list(self._by_key.items())

    def definitions(self) -> tuple[ExtensionAxiom, ...]:
        """Extension axioms y_i - (a.x - a0), in registry order."""
        return tuple(self._defs)

    def __len__(self) -> int:
        return len(self._by_key)


def build_registry(
    axioms: Sequence[Disjunction], proof: Sequence[RlLine]
) -> Registry:
    """Scan axioms then proof lines in order, interning every disjunct."""
    registry = Registry()
    for disjunction in axioms:
        for eq in disjunction.disjuncts:
            registry.intern(eq)
    for line in proof:
        for eq in line.disjunction.disjuncts:
            registry.intern(eq)
    return registry


@dataclass(frozen=True)
class HatSystem:
    """Product-equation encoding of one disjunction."""

    product_equation: Polynomial
    definitions: tuple[ExtensionAxiom, ...]


def product_monomial(disjunction: Disjunction, registry: Registry) -> Monomial:
    return Monomial(
        [(registry.lookup(eq), 1) for eq in disjunction.disjuncts]
    )


def hat(disjunction: Disjunction, registry: Registry) -> HatSystem:
    """The product of the disjuncts' y-variables; empty becomes the constant 1."""
    mono = product_monomial(disjunction, registry)
    seen: list[ExtensionAxiom] = []
    used = {registry.lookup(eq) for eq in disjunction.disjuncts}
    for definition in registry.definitions():
        if definition.var in used:
            seen.append(definition)
    return HatSystem(
        Polynomial(((mono, 1),)),
        tuple(seen),
    )


# -- serialization ------------------------------------------------------------


def lineq_to_obj(eq: LinEq) -> dict[str, object]:
    return {
        "coeffs": {v.name: c for v, c in eq.coeffs},
        "const": eq.constant,
    }


def _require_int(value: object, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise FormatError(f"{what} must be an integer")
    return value


def lineq_from_obj(obj: object) -> LinEq:
    if not isinstance(obj, dict) or set(obj) != {"coeffs", "const"}:
        raise FormatError(f"equation must have 'coeffs' and 'const', got {obj!r}")
    raw = obj["coeffs"]
    if not isinstance(raw, dict):
        raise FormatError("'coeffs' must be an object")
    coeffs = {}
    for name, value in raw.items():
        var = parse_var(name)
        if var.kind != "x":
            raise FormatError(f"equation coefficients range over x-variables, got {name}")
        value = _require_int(value, f"coefficient of {name}")
        if value == 0:
            raise FormatError(f"zero coefficient for {name} is not canonical")
        coeffs[var] = value
    return LinEq.of(coeffs, _require_int(obj["const"], "'const'"))


def disjunction_to_obj(disjunction: Disjunction) -> list:
    return [lineq_to_obj(eq) for eq in disjunction.disjuncts]


def disjunction_from_obj(obj: object) -> Disjunction:
    if not isinstance(obj, list):
        raise FormatError(f"disjunction must be an array, got {obj!r}")
    return Disjunction(tuple(lineq_from_obj(entry) for entry in obj))


def rl_rule_to_obj(rule: RlRule) -> dict[str, object]:
    if isinstance(rule, RlAxiom):
        return {"type": "axiom", "index": rule.index}
    if isinstance(rule, RlBooleanAxiom):
        return {"type": "boolean", "var": rule.var.name}
    if isinstance(rule, RlResolution):
        return {
            "type": "resolution",
            "j": rule.j,
            "k": rule.k,
            "dj": rule.dj,
            "dk": rule.dk,
            "alpha": rule.alpha,
            "beta": rule.beta,
        }
    if isinstance(rule, RlWeakening):
        return {"type": "weakening", "j": rule.j, "eq": lineq_to_obj(rule.eq)}
    if isinstance(rule, RlSimplification):
        return {"type": "simplification", "j": rule.j, "d": rule.d}
    if isinstance(rule, RlContraction):
        return {"type": "contraction", "j": rule.j, "d1": rule.d1, "d2": rule.d2}
    raise TypeError(f"unknown rule {rule!r}")


def rl_rule_from_obj(obj: object) -> RlRule:
    if not isinstance(obj, dict) or "type" not in obj:
        raise FormatError(f"rule must be an object with a 'type', got {obj!r}")
    kind = obj["type"]
    fields = set(obj)
    if kind == "axiom" and fields == {"type", "index"}:
        return RlAxiom(_require_int(obj["index"], "axiom index"))
    if kind == "boolean" and fields == {"type", "var"}:
        var = parse_var(obj["var"])
        if var.kind != "x":
            raise FormatError("boolean axioms range over x-variables")
        return RlBooleanAxiom(var)
    if kind == "resolution" and fields == {"type", "j", "k", "dj", "dk", "alpha", "beta"}:
        return RlResolution(
            _require_int(obj["j"], "j"),
            _require_int(obj["k"], "k"),
            _require_int(obj["dj"], "dj"),
            _require_int(obj["dk"], "dk"),
            _require_int(obj["alpha"], "alpha"),
            _require_int(obj["beta"], "beta"),
        )
    if kind == "weakening" and fields == {"type", "j", "eq"}:
        return RlWeakening(_require_int(obj["j"], "j"), lineq_from_obj(obj["eq"]))
    if kind == "simplification" and fields == {"type", "j", "d"}:
        return RlSimplification(_require_int(obj["j"], "j"), _require_int(obj["d"], "d"))
    if kind == "contraction" and fields == {"type", "j", "d1", "d2"}:
        return RlContraction(
            _require_int(obj["j"], "j"),
            _require_int(obj["d1"], "d1"),
            _require_int(obj["d2"], "d2"),
        )
    raise FormatError(f"malformed rule {obj!r}")


def reslin_to_obj(
    axioms: Sequence[Disjunction], proof: Sequence[RlLine]
) -> dict[str, object]:
    return {
        "axioms": [disjunction_to_obj(d) for d in axioms],
        "lines": [
            {
                "disjunction": disjunction_to_obj(line.disjunction),
                "rule": rl_rule_to_obj(line.rule),
            }
            for line in proof
        ],
    }


def reslin_from_obj(obj: object) -> tuple[list[Disjunction], list[RlLine]]:
    if not isinstance(obj, dict) or set(obj) != {"axioms", "lines"}:
        raise FormatError("document must have exactly 'axioms' and 'lines'")
    raw_axioms, raw_lines = obj["axioms"], obj["lines"]
    if not isinstance(raw_axioms, list) or not isinstance(raw_lines, list):
        raise FormatError("'axioms' and 'lines' must be arrays")
    axioms = [disjunction_from_obj(d) for d in raw_axioms]
    lines = []
    for entry in raw_lines:
        if not isinstance(entry, dict) or set(entry) != {"disjunction", "rule"}:
            raise FormatError(f"malformed proof line {entry!r}")
        lines.append(
            RlLine(
                disjunction_from_obj(entry["disjunction"]),
                rl_rule_from_obj(entry["rule"]),
            )
        )
    return axioms, lines
