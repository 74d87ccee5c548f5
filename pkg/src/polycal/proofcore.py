"""Line-by-line checking of algebraic refutations.

A proof is a sequence of lines, each a polynomial (asserted equal to zero)
plus the rule that justifies it:

  Axiom(i)                 copy of the i-th axiom (base axioms first, then
                           extension axioms as var - definition)
  LinComb(j, k, a, b)      a * line[j] + b * line[k]
  MulVar(k, v)             v * line[k]
  Sqrt(k)                  a square root: line^2 == line[k]

Which rules and scalars are admissible depends on the proof system
(`SystemKind`): proofs over the integers restrict every scalar and line
coefficient to ints, square roots may be forbidden, extension axioms may be
forbidden or restricted to affine definitions, and the accepted final line
is either exactly 1 (field systems) or any nonzero constant (ring systems).

Checking is sequential with first-error semantics: the report carries the
earliest offending line index, a stable error code, and a message.  Failures
of the axiom set itself are reported at the sentinel line index -1.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .polyring import (
    FormatError,
    Monomial,
    Polynomial,
    Scalar,
    VarId,
    as_scalar,
    parse_var,
    poly_from_obj,
    poly_to_obj,
    scalar_from_str,
    scalar_to_str,
)


class SystemKind(Enum):
    """Proof system flavor; the value is the wire name."""

    PC_Q = "pc-q"
    PCSQRT_Q = "pcsqrt-q"
    PCSQRT_Z = "pcsqrt-z"
    EXTPCSQRT_Q = "extpcsqrt-q"
    EXTPCSQRT_Z = "extpcsqrt-z"
    SPS_PC_Q = "spspc-q"

    @property
    def allows_sqrt(self) -> bool:
        return self not in (SystemKind.PC_Q, SystemKind.SPS_PC_Q)

    @property
    def requires_integers(self) -> bool:
        return self in (SystemKind.PCSQRT_Z, SystemKind.EXTPCSQRT_Z)

    @property
    def allows_extensions(self) -> bool:
        return self is not SystemKind.PC_Q

    @property
    def affine_extensions_only(self) -> bool:
        return self is SystemKind.SPS_PC_Q

    @property
    def final_must_be_one(self) -> bool:
        """Field systems end in exactly 1; ring systems in any nonzero constant."""
        return self in (SystemKind.PC_Q, SystemKind.SPS_PC_Q)


@dataclass(frozen=True)
class Axiom:
    index: int


@dataclass(frozen=True)
class LinComb:
    j: int
    k: int
    alpha: Scalar
    beta: Scalar


@dataclass(frozen=True)
class MulVar:
    k: int
    var: VarId


@dataclass(frozen=True)
class Sqrt:
    k: int


StepRule = Union[Axiom, LinComb, MulVar, Sqrt]


@dataclass(frozen=True)
class ProofLine:
    poly: Polynomial
    rule: StepRule


@dataclass(frozen=True)
class ExtensionAxiom:
    """A definition var := definition, used as the axiom var - definition."""

    var: VarId
    definition: Polynomial

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.variable(self.var) - self.definition


@dataclass(frozen=True)
class AxiomSet:
    base: tuple[Polynomial, ...]
    extensions: tuple[ExtensionAxiom, ...] = ()

    def all_polynomials(self) -> list[Polynomial]:
        """Base axioms followed by extension axioms, the Axiom-rule index space."""
        return [*self.base, *(ext.polynomial for ext in self.extensions)]

    def __len__(self) -> int:
        return len(self.base) + len(self.extensions)


@dataclass(frozen=True)
class CheckError:
    line: int  # -1 for axiom-set-level failures
    code: str
    message: str


@dataclass(frozen=True)
class CheckReport:
    valid: bool
    error: Optional[CheckError]
    final_constant: Optional[Scalar]
    total_size: int
    degree: int
    line_count: int


def validate_axiom_set(axioms: AxiomSet, kind: SystemKind) -> Optional[CheckError]:
    """Check the axiom set against the system's structural rules."""

    def fail(code: str, message: str) -> CheckError:
        return CheckError(-1, code, message)

    if axioms.extensions and not kind.allows_extensions:
        return fail(
            "ExtensionForbidden",
            f"{kind.value} does not admit extension axioms",
        )
    if kind.requires_integers:
        for i, poly in enumerate(axioms.base):
            if not poly.is_integral():
                return fail(
                    "NonIntegerCoefficient",
                    f"base axiom {i} has a non-integer coefficient",
                )
    defined: set[VarId] = set()
    last_index = 0
    for pos, ext in enumerate(axioms.extensions):
        if ext.var.kind != "y":
            return fail(
                "ExtensionOrderViolation",
                f"extension {pos} must define a y-variable, got {ext.var.name}",
            )
        if ext.var.index <= last_index:
            return fail(
                "ExtensionOrderViolation",
                f"extension variables must have strictly increasing indices "
                f"({ext.var.name} after y{last_index})",
            )
        for var in ext.definition.variables():
            if var.kind == "y" and var not in defined:
                return fail(
                    "ExtensionOrderViolation",
                    f"definition of {ext.var.name} mentions {var.name}, "
                    f"which is not defined earlier",
                )
        if kind.requires_integers and not ext.definition.is_integral():
            return fail(
                "NonIntegerCoefficient",
                f"definition of {ext.var.name} has a non-integer coefficient",
            )
        if kind.affine_extensions_only and ext.definition.degree > 1:
            return fail(
                "ExtensionNotAffine",
                f"definition of {ext.var.name} has degree "
                f"{ext.definition.degree}, affine required",
            )
        defined.add(ext.var)
        last_index = ext.var.index
    return None


def _scalar_ok(value: Scalar, kind: SystemKind) -> bool:
    return not kind.requires_integers or not (
        isinstance(value, Fraction) and value.denominator != 1
    )


def _verify_line(
    prefix: Sequence[ProofLine],
    index: int,
    line: ProofLine,
    axioms: AxiomSet,
    kind: SystemKind,
) -> Optional[CheckError]:
    """Verify one line against the lines before it.  prefix[:index] is visible."""

    def fail(code: str, message: str) -> CheckError:
        return CheckError(index, code, message)

    if kind.requires_integers and not line.poly.is_integral():
        return fail(
            "NonIntegerCoefficient",
            f"line {index} has a non-integer coefficient",
        )
    rule = line.rule
    if isinstance(rule, Axiom):
        pool = axioms.all_polynomials()
        if not 0 <= rule.index < len(pool):
            return fail("BadIndex", f"axiom index {rule.index} out of range")
        if line.poly != pool[rule.index]:
            return fail(
                "AxiomNotInSet",
                f"line {index} does not match axiom {rule.index}",
            )
        return None
    if isinstance(rule, LinComb):
        if not (0 <= rule.j < index and 0 <= rule.k < index):
            return fail(
                "BadIndex",
                f"linear combination cites lines {rule.j},{rule.k} "
                f"at line {index}",
            )
        alpha, beta = as_scalar(rule.alpha), as_scalar(rule.beta)
        if not (_scalar_ok(alpha, kind) and _scalar_ok(beta, kind)):
            return fail(
                "NonIntegerScalar",
                f"{kind.value} requires integer scalars, got "
                f"{scalar_to_str(alpha)}, {scalar_to_str(beta)}",
            )
        expected = prefix[rule.j].poly.scale(alpha).add(
            prefix[rule.k].poly.scale(beta)
        )
        if line.poly != expected:
            return fail(
                "RuleMismatch",
                f"line {index} is not the claimed linear combination",
            )
        return None
    if isinstance(rule, MulVar):
        if not 0 <= rule.k < index:
            return fail("BadIndex", f"multiplication cites line {rule.k}")
        if line.poly != prefix[rule.k].poly.mul_var(rule.var):
            return fail(
                "RuleMismatch",
                f"line {index} is not line {rule.k} times {rule.var.name}",
            )
        return None
    if isinstance(rule, Sqrt):
        if not kind.allows_sqrt:
            return fail(
                "SqrtForbidden", f"{kind.value} does not admit square roots"
            )
        if not 0 <= rule.k < index:
            return fail("BadIndex", f"square root cites line {rule.k}")
        if line.poly.square() != prefix[rule.k].poly:
            return fail(
                "SqrtMismatch",
                f"line {index} squared does not equal line {rule.k}",
            )
        return None
    raise TypeError(f"unknown rule {rule!r}")


def check_step(
    prefix: Sequence[ProofLine],
    line: ProofLine,
    axioms: AxiomSet,
    kind: SystemKind,
) -> Optional[CheckError]:
    """Verify a single candidate line given the already-accepted prefix."""
    return _verify_line(prefix, len(prefix), line, axioms, kind)


def measure(proof: Sequence[ProofLine]) -> tuple[int, int, int]:
    """(total bit size, max degree, line count); zero lines never feed the max."""
    total = 0
    degree = -1
    for line in proof:
        total += line.poly.bit_size()
        if not line.poly.is_zero():
            degree = max(degree, line.poly.degree)
    return total, degree, len(proof)


def check_refutation(
    axioms: AxiomSet, proof: Sequence[ProofLine], kind: SystemKind
) -> CheckReport:
    """Check every line and the final-line condition; first error wins."""
    if not proof:
        raise ValueError("a refutation needs at least one line")
    total_size, degree, line_count = measure(proof)

    def report(error: Optional[CheckError], final: Optional[Scalar]) -> CheckReport:
        return CheckReport(
            valid=error is None,
            error=error,
            final_constant=final,
            total_size=total_size,
            degree=degree,
            line_count=line_count,
        )

    error = validate_axiom_set(axioms, kind)
    if error is not None:
        return report(error, None)
    for index, line in enumerate(proof):
        error = _verify_line(proof, index, line, axioms, kind)
        if error is not None:
            return report(error, None)
    last = proof[-1].poly
    last_index = line_count - 1
    if not last.is_constant():
        return report(
            CheckError(
                last_index, "FinalNotConstant", "final line is not a constant"
            ),
            None,
        )
    final = last.constant_value()
    if final == 0:
        return report(
            CheckError(last_index, "FinalZero", "final constant is zero"), None
        )
    if kind.final_must_be_one and final != 1:
        return report(
            CheckError(
                last_index,
                "FinalNotOne",
                f"{kind.value} must end in 1, got {scalar_to_str(final)}",
            ),
            None,
        )
    return report(None, final)


class ProofBuildError(Exception):
    """A builder step violated the target system's rules (internal defect)."""


class ProofBuilder:
    """Accumulates a derivation, computing rule results so lines check by
    construction.  Raw `append` re-verifies via check_step."""

    def __init__(self, axioms: AxiomSet, kind: SystemKind):
        error = validate_axiom_set(axioms, kind)
        if error is not None:
            raise ProofBuildError(f"{error.code}: {error.message}")
        self.axioms = axioms
        self.kind = kind
        self.lines: list[ProofLine] = []
        self._axiom_lines: dict[int, int] = {}
        self._pool = axioms.all_polynomials()
        self._ext_position = {
            ext.var: len(axioms.base) + i
            for i, ext in enumerate(axioms.extensions)
        }

    def __len__(self) -> int:
        return len(self.lines)

    def poly_at(self, index: int) -> Polynomial:
        return self.lines[index].poly

    def append(self, poly: Polynomial, rule: StepRule) -> int:
        error = check_step(self.lines, ProofLine(poly, rule), self.axioms, self.kind)
        if error is not None:
            raise ProofBuildError(f"{error.code}: {error.message}")
        self.lines.append(ProofLine(poly, rule))
        return len(self.lines) - 1

    def _push(self, poly: Polynomial, rule: StepRule) -> int:
        self.lines.append(ProofLine(poly, rule))
        return len(self.lines) - 1

    def axiom_line(self, index: int) -> int:
        """Line holding axiom `index`, appended on first use."""
        got = self._axiom_lines.get(index)
        if got is None:
            if not 0 <= index < len(self._pool):
                raise ProofBuildError(f"BadIndex: axiom {index} out of range")
            got = self._push(self._pool[index], Axiom(index))
            self._axiom_lines[index] = got
        return got

    def extension_line(self, var: VarId) -> int:
        position = self._ext_position.get(var)
        if position is None:
            raise ProofBuildError(f"BadIndex: no extension axiom for {var.name}")
        return self.axiom_line(position)

    def lincomb(self, j: int, k: int, alpha: Scalar, beta: Scalar) -> int:
        alpha, beta = as_scalar(alpha), as_scalar(beta)
        if not (_scalar_ok(alpha, self.kind) and _scalar_ok(beta, self.kind)):
            raise ProofBuildError(
                f"NonIntegerScalar: {scalar_to_str(alpha)}, {scalar_to_str(beta)}"
            )
        poly = self.poly_at(j).scale(alpha).add(self.poly_at(k).scale(beta))
        return self._push(poly, LinComb(j, k, alpha, beta))

    def scale_line(self, k: int, factor: Scalar) -> int:
        return self.lincomb(k, k, factor, 0)

    def mul_var(self, k: int, var: VarId) -> int:
        return self._push(self.poly_at(k).mul_var(var), MulVar(k, var))

    def sqrt_of(self, k: int, root: Polynomial) -> int:
        if not self.kind.allows_sqrt:
            raise ProofBuildError(f"SqrtForbidden: {self.kind.value}")
        if root.square() != self.poly_at(k):
            raise ProofBuildError(f"SqrtMismatch: claimed root of line {k}")
        if self.kind.requires_integers and not root.is_integral():
            raise ProofBuildError("NonIntegerCoefficient: non-integral root")
        return self._push(root, Sqrt(k))

    def sum_lines(self, indices: Sequence[int]) -> int:
        """Combine many lines into their sum with pairwise LinComb steps."""
        if not indices:
            raise ProofBuildError("BadIndex: empty sum")
        layer = list(indices)
        while len(layer) > 1:
            merged = []
            for i in range(0, len(layer) - 1, 2):
                merged.append(self.lincomb(layer[i], layer[i + 1], 1, 1))
            if len(layer) % 2:
                merged.append(layer[-1])
            layer = merged
        return layer[0]


def emit_monomial_multiple(
    builder: ProofBuilder, source: int, mono: Monomial, factor: Scalar
) -> int:
    """Derive factor * mono * line[source] with deg(mono) + 1 primitive lines.

    One MulVar per variable occurrence of mono (in canonical order), then a
    single scaling LinComb, emitted even for factor 1 so the line count is
    always deg(mono) + 1.
    """
    current = source
    for var in mono.factor_sequence():
        current = builder.mul_var(current, var)
    return builder.scale_line(current, factor)


# -- serialization ------------------------------------------------------------


def rule_to_obj(rule: StepRule) -> dict[str, object]:
    if isinstance(rule, Axiom):
        return {"type": "axiom", "index": rule.index}
    if isinstance(rule, LinComb):
        return {
            "type": "lincomb",
            "j": rule.j,
            "k": rule.k,
            "alpha": scalar_to_str(rule.alpha),
            "beta": scalar_to_str(rule.beta),
        }
    if isinstance(rule, MulVar):
        return {"type": "mulvar", "k": rule.k, "var": rule.var.name}
    if isinstance(rule, Sqrt):
        return {"type": "sqrt", "k": rule.k}
    raise TypeError(f"unknown rule {rule!r}")


def _require_fields(obj: dict, fields: set[str], what: str) -> None:
    if set(obj) != fields:
        raise FormatError(f"{what} must have exactly the fields {sorted(fields)}")


def _require_index(value: object, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise FormatError(f"{what} must be a non-negative integer")
    return value


def rule_from_obj(obj: object) -> StepRule:
    if not isinstance(obj, dict) or "type" not in obj:
        raise FormatError(f"rule must be an object with a 'type', got {obj!r}")
    kind = obj["type"]
    if kind == "axiom":
        _require_fields(obj, {"type", "index"}, "axiom rule")
        return Axiom(_require_index(obj["index"], "axiom index"))
    if kind == "lincomb":
        _require_fields(obj, {"type", "j", "k", "alpha", "beta"}, "lincomb rule")
        return LinComb(
            _require_index(obj["j"], "lincomb j"),
            _require_index(obj["k"], "lincomb k"),
            scalar_from_str(obj["alpha"]),
            scalar_from_str(obj["beta"]),
        )
    if kind == "mulvar":
        _require_fields(obj, {"type", "k", "var"}, "mulvar rule")
        return MulVar(_require_index(obj["k"], "mulvar k"), parse_var(obj["var"]))
    if kind == "sqrt":
        _require_fields(obj, {"type", "k"}, "sqrt rule")
        return Sqrt(_require_index(obj["k"], "sqrt k"))
    raise FormatError(f"unknown rule type {kind!r}")


def axioms_to_obj(axioms: AxiomSet) -> dict[str, object]:
    return {
        "base": [poly_to_obj(p) for p in axioms.base],
        "extensions": [
            {"var": ext.var.name, "def": poly_to_obj(ext.definition)}
            for ext in axioms.extensions
        ],
    }


def axioms_from_obj(obj: object) -> AxiomSet:
    if not isinstance(obj, dict) or set(obj) != {"base", "extensions"}:
        raise FormatError("axioms must have exactly 'base' and 'extensions'")
    base = obj["base"]
    extensions = obj["extensions"]
    if not isinstance(base, list) or not isinstance(extensions, list):
        raise FormatError("'base' and 'extensions' must be arrays")
    exts = []
    for entry in extensions:
        if not isinstance(entry, dict) or set(entry) != {"var", "def"}:
            raise FormatError(f"malformed extension {entry!r}")
        var = parse_var(entry["var"])
        if var.kind != "y":
            raise FormatError(f"extension variable must be y<k>, got {var.name}")
        exts.append(ExtensionAxiom(var, poly_from_obj(entry["def"])))
    return AxiomSet(
        tuple(poly_from_obj(p) for p in base),
        tuple(exts),
    )


def proof_to_obj(
    kind: SystemKind, axioms: AxiomSet, proof: Sequence[ProofLine]
) -> dict[str, object]:
    return {
        "system": kind.value,
        "axioms": axioms_to_obj(axioms),
        "lines": [
            {"poly": poly_to_obj(line.poly), "rule": rule_to_obj(line.rule)}
            for line in proof
        ],
    }


def proof_from_obj(obj: object) -> tuple[SystemKind, AxiomSet, list[ProofLine]]:
    if not isinstance(obj, dict) or set(obj) != {"system", "axioms", "lines"}:
        raise FormatError(
            "proof must have exactly 'system', 'axioms' and 'lines'"
        )
    try:
        kind = SystemKind(obj["system"])
    except ValueError:
        raise FormatError(f"unknown system {obj['system']!r}") from None
    axioms = axioms_from_obj(obj["axioms"])
    raw_lines = obj["lines"]
    if not isinstance(raw_lines, list):
        raise FormatError("'lines' must be an array")
    lines = []
    for entry in raw_lines:
        if not isinstance(entry, dict) or set(entry) != {"poly", "rule"}:
            raise FormatError(f"malformed proof line {entry!r}")
        lines.append(
            ProofLine(poly_from_obj(entry["poly"]), rule_from_obj(entry["rule"]))
        )
    return kind, axioms, lines


def error_to_obj(error: Optional[CheckError]) -> Optional[dict[str, object]]:
    if error is None:
        return None
    return {"line": error.line, "code": error.code, "message": error.message}


def error_from_obj(obj: object) -> Optional[CheckError]:
    if obj is None:
        return None
    if not isinstance(obj, dict) or set(obj) != {"line", "code", "message"}:
        raise FormatError("error must have 'line', 'code' and 'message'")
    line = obj["line"]
    if not isinstance(line, int) or isinstance(line, bool):
        raise FormatError("error line must be an integer")
    return CheckError(line, str(obj["code"]), str(obj["message"]))


def report_to_obj(report: CheckReport) -> dict[str, object]:
    return {
        "valid": report.valid,
        "error": error_to_obj(report.error),
        "final_constant": None
        if report.final_constant is None
        else scalar_to_str(report.final_constant),
        "total_size": report.total_size,
        "degree": report.degree,
        "line_count": report.line_count,
    }


def report_from_obj(obj: object) -> CheckReport:
    fields = {"valid", "error", "final_constant", "total_size", "degree", "line_count"}
    if not isinstance(obj, dict) or set(obj) != fields:
        raise FormatError(f"report must have exactly the fields {sorted(fields)}")
    if not isinstance(obj["valid"], bool):
        raise FormatError("'valid' must be a boolean")
    final = obj["final_constant"]
    return CheckReport(
        valid=obj["valid"],
        error=error_from_obj(obj["error"]),
        final_constant=None if final is None else scalar_from_str(final),
        total_size=_require_index(obj["total_size"], "total_size"),
        degree=obj["degree"]
        if isinstance(obj["degree"], int) and not isinstance(obj["degree"], bool)
        else _raise_degree(obj["degree"]),
        line_count=_require_index(obj["line_count"], "line_count"),
    )


def _raise_degree(value: object) -> int:
    raise FormatError(f"degree must be an integer, got {value!r}")
