"""Unit tests for the refutation checker."""

from fractions import Fraction

import pytest

from polycal.polyring import Monomial, Polynomial, poly_parse, xvar, yvar
from polycal.proofcore import (
    Axiom,
    AxiomSet,
    CheckError,
    ExtensionAxiom,
    LinComb,
    MulVar,
    ProofBuilder,
    ProofBuildError,
    ProofLine,
    Sqrt,
    SystemKind,
    check_refutation,
    check_step,
    emit_monomial_multiple,
    measure,
    proof_from_obj,
    proof_to_obj,
    report_from_obj,
    report_to_obj,
    rule_from_obj,
    rule_to_obj,
    validate_axiom_set,
)

P = poly_parse
x1, x2 = xvar(1), xvar(2)
y1, y2 = yvar(1), yvar(2)

Z = SystemKind.PCSQRT_Z
Q = SystemKind.PCSQRT_Q
EXT_Q = SystemKind.EXTPCSQRT_Q


def five_line_refutation():
    """Hand refutation of {2x-1, x^2-x} over the integers, final constant 2."""
    axioms = AxiomSet((P("2*x1 - 1"), P("x1^2 - x1")))
    lines = [
        ProofLine(P("2*x1 - 1"), Axiom(0)),
        ProofLine(P("2*x1^2 - x1"), MulVar(0, x1)),
        ProofLine(P("x1^2 - x1"), Axiom(1)),
        ProofLine(P("x1"), LinComb(1, 2, 1, -2)),
        ProofLine(P("2"), LinComb(3, 0, 4, -2)),
    ]
    return axioms, lines


def test_five_line_refutation_passes_over_z():
    axioms, lines = five_line_refutation()
    report = check_refutation(axioms, lines, Z)
    assert report.valid and report.error is None
    assert report.final_constant == 2
    assert report.line_count == 5


def test_measure_frozen_example():
    assert measure([ProofLine(P("1"), Axiom(0))]) == (0, 0, 1)
    axioms, lines = five_line_refutation()
    total, degree, count = measure(lines)
    assert degree == 2 and count == 5
    # 2x-1:1, 2x^2-x:1, x^2-x:0, x:0, 2:1
    assert total == 3


def test_zero_line_degree_sentinel():
    axioms = AxiomSet((P("x1"),))
    lines = [
        ProofLine(P("x1"), Axiom(0)),
        ProofLine(Polynomial.zero(), LinComb(0, 0, 1, -1)),
    ]
    _, degree, _ = measure([lines[1]])
    assert degree == -1
    # zero lines are legal derivation steps
    assert check_step(lines[:1], lines[1], axioms, Z) is None


def test_monotone_prefix_property():
    axioms, lines = five_line_refutation()
    for i in range(len(lines)):
        assert check_step(lines[:i], lines[i], axioms, Z) is None


def test_check_is_deterministic():
    axioms, lines = five_line_refutation()
    a = report_to_obj(check_refutation(axioms, lines, Z))
    b = report_to_obj(check_refutation(axioms, lines, Z))
    assert a == b


# -- error codes ---------------------------------------------------------------


def expect_error(axioms, lines, kind, code, line_index):
    report = check_refutation(axioms, lines, kind)
    assert not report.valid
    assert report.error is not None
    assert report.error.code == code, report.error
    assert report.error.line == line_index
    assert report.final_constant is None
    return report


def test_bad_index():
    axioms = AxiomSet((P("x1"),))
    expect_error(
        axioms,
        [ProofLine(P("x1"), Axiom(3)), ProofLine(P("1"), Axiom(0))],
        Z,
        "BadIndex",
        0,
    )
    expect_error(
        axioms,
        [ProofLine(P("x1"), Axiom(0)), ProofLine(P("2"), LinComb(0, 1, 1, 1))],
        Z,
        "BadIndex",
        1,
    )
    expect_error(
        axioms,
        [ProofLine(P("x1"), Axiom(0)), ProofLine(P("x1^2"), MulVar(1, x1))],
        Z,
        "BadIndex",
        1,
    )


def test_axiom_not_in_set():
    axioms = AxiomSet((P("x1"),))
    expect_error(
        axioms, [ProofLine(P("x1 + 1"), Axiom(0))], Z, "AxiomNotInSet", 0
    )


def test_rule_mismatch():
    axioms = AxiomSet((P("x1"),))
    expect_error(
        axioms,
        [ProofLine(P("x1"), Axiom(0)), ProofLine(P("x1^2 + 1"), MulVar(0, x1))],
        Z,
        "RuleMismatch",
        1,
    )
    expect_error(
        axioms,
        [ProofLine(P("x1"), Axiom(0)), ProofLine(P("3*x1 + 1"), LinComb(0, 0, 1, 2))],
        Z,
        "RuleMismatch",
        1,
    )


def test_sqrt_mismatch_and_sign_agnosticism():
    axioms = AxiomSet((P("x1^2"),))
    base = [ProofLine(P("x1^2"), Axiom(0))]
    assert check_step(base, ProofLine(P("x1"), Sqrt(0)), axioms, Z) is None
    assert check_step(base, ProofLine(P("-x1"), Sqrt(0)), axioms, Z) is None
    err = check_step(base, ProofLine(P("x1 + 1"), Sqrt(0)), axioms, Z)
    assert err is not None and err.code == "SqrtMismatch" and err.line == 1


def test_sqrt_forbidden():
    axioms = AxiomSet((P("x1^2"),))
    lines = [ProofLine(P("x1^2"), Axiom(0)), ProofLine(P("x1"), Sqrt(0))]
    expect_error(axioms, lines, SystemKind.PC_Q, "SqrtForbidden", 1)
    expect_error(axioms, lines, SystemKind.SPS_PC_Q, "SqrtForbidden", 1)
    # the same sqrt step is accepted where roots are admitted
    assert check_step(lines[:1], lines[1], axioms, Q) is None


def test_non_integer_scalar():
    axioms = AxiomSet((P("2*x1"),))
    lines = [
        ProofLine(P("2*x1"), Axiom(0)),
        ProofLine(P("x1"), LinComb(0, 0, Fraction(1, 2), 0)),
    ]
    expect_error(axioms, lines, Z, "NonIntegerScalar", 1)
    # same proof is fine over the rationals
    assert check_step(lines[:1], lines[1], axioms, Q) is None


def test_non_integer_coefficient():
    axioms = AxiomSet((P("2*x1"),))
    lines = [
        ProofLine(P("2*x1"), Axiom(0)),
        ProofLine(P("1/2*x1"), LinComb(0, 0, Fraction(1, 4), 0)),
    ]
    # the line coefficient check fires before the scalar check
    expect_error(axioms, lines, Z, "NonIntegerCoefficient", 1)


def test_axiom_set_errors_report_line_minus_one():
    quadratic = AxiomSet((P("x1"),), (ExtensionAxiom(y1, P("x1^2")),))
    lines = [ProofLine(P("x1"), Axiom(0))]
    expect_error(quadratic, lines, SystemKind.SPS_PC_Q, "ExtensionNotAffine", -1)

    out_of_order = AxiomSet(
        (P("x1"),),
        (ExtensionAxiom(y2, P("x1")), ExtensionAxiom(y1, P("x1"))),
    )
    expect_error(out_of_order, lines, EXT_Q, "ExtensionOrderViolation", -1)

    forward_ref = AxiomSet((P("x1"),), (ExtensionAxiom(y1, P("y2 + x1")),))
    expect_error(forward_ref, lines, EXT_Q, "ExtensionOrderViolation", -1)

    duplicate = AxiomSet(
        (P("x1"),),
        (ExtensionAxiom(y1, P("x1")), ExtensionAxiom(y1, P("x1"))),
    )
    expect_error(duplicate, lines, EXT_Q, "ExtensionOrderViolation", -1)

    rational_def = AxiomSet((P("x1"),), (ExtensionAxiom(y1, P("1/2*x1")),))
    expect_error(
        rational_def, lines, SystemKind.EXTPCSQRT_Z, "NonIntegerCoefficient", -1
    )

    with_exts = AxiomSet((P("x1"),), (ExtensionAxiom(y1, P("x1")),))
    expect_error(with_exts, lines, SystemKind.PC_Q, "ExtensionForbidden", -1)


def test_extension_axiom_usable_after_validation():
    axioms = AxiomSet(
        (P("x1"),),
        (ExtensionAxiom(y1, P("x1")), ExtensionAxiom(y2, P("y1^2 + 1"))),
    )
    assert validate_axiom_set(axioms, EXT_Q) is None
    line = ProofLine(P("y2 - y1^2 - 1"), Axiom(2))
    assert check_step([], line, axioms, EXT_Q) is None


def test_final_line_conditions():
    axioms = AxiomSet((P("x1"),))
    expect_error(
        axioms, [ProofLine(P("x1"), Axiom(0))], Z, "FinalNotConstant", 0
    )
    zero_end = [
        ProofLine(P("x1"), Axiom(0)),
        ProofLine(Polynomial.zero(), LinComb(0, 0, 0, 0)),
    ]
    expect_error(axioms, zero_end, Z, "FinalZero", 1)

    two_end = AxiomSet((P("2"),))
    lines = [ProofLine(P("2"), Axiom(0))]
    assert check_refutation(two_end, lines, Z).valid  # ring: any nonzero constant
    expect_error(two_end, lines, SystemKind.PC_Q, "FinalNotOne", 0)


def test_empty_proof_rejected():
    with pytest.raises(ValueError):
        check_refutation(AxiomSet((P("x1"),)), [], Z)


# -- builder and emit -----------------------------------------------------------


def test_emit_monomial_multiple_line_count_and_value():
    axioms = AxiomSet((P("x1 + 1"),))
    builder = ProofBuilder(axioms, Z)
    src = builder.axiom_line(0)
    before = len(builder)
    mono = Monomial.of(x1, 2)
    out = emit_monomial_multiple(builder, src, mono, 1)
    assert len(builder) - before == mono.degree + 1 == 3
    assert builder.poly_at(out) == P("x1^3 + x1^2")
    # identity monomial: exactly one line, an identity combination
    out2 = emit_monomial_multiple(builder, src, Monomial.one(), 1)
    assert builder.poly_at(out2) == P("x1 + 1")
    # every emitted line passes check_step replay
    for i, line in enumerate(builder.lines):
        assert check_step(builder.lines[:i], line, axioms, Z) is None


def test_emit_propagates_scalar_restrictions():
    builder = ProofBuilder(AxiomSet((P("x1"),)), Z)
    src = builder.axiom_line(0)
    with pytest.raises(ProofBuildError):
        emit_monomial_multiple(builder, src, Monomial.one(), Fraction(1, 2))


def test_builder_sum_lines():
    axioms = AxiomSet((P("x1"), P("x2"), P("x1*x2")))
    builder = ProofBuilder(axioms, Z)
    idxs = [builder.axiom_line(i) for i in range(3)]
    total = builder.sum_lines(idxs)
    assert builder.poly_at(total) == P("x1 + x2 + x1*x2")
    report = check_refutation(
        AxiomSet((P("x1"), P("x2"), P("x1*x2"))),
        builder.lines + [ProofLine(Polynomial.zero(), LinComb(total, total, 1, -1))],
        Z,
    )
    # derivation steps are all fine; only the final-constant rule fails
    assert report.error.code == "FinalZero"


def test_builder_rejects_invalid_append():
    builder = ProofBuilder(AxiomSet((P("x1"),)), Z)
    builder.axiom_line(0)
    with pytest.raises(ProofBuildError):
        builder.append(P("x1 + 1"), MulVar(0, x1))


# -- mod-p soundness (small sample; the acceptance suite runs the full one) ------


def test_mod_p_soundness_sample():
    import random

    rng = random.Random(7)
    for trial in range(10):
        point = {x1: rng.randrange(-9, 10), x2: rng.randrange(-9, 10)}
        q = P("x1^2 + 3*x1*x2 - 2*x2 + 1")
        axiom = q - Polynomial.constant(q.evaluate(point))
        axioms = AxiomSet((axiom,))
        builder = ProofBuilder(axioms, Z)
        a = builder.axiom_line(0)
        b = builder.mul_var(a, x2)
        c = builder.lincomb(a, b, 3, -2)
        d = emit_monomial_multiple(builder, c, Monomial.of(x1), 5)
        for p in (2, 3, 5, 7):
            for line in builder.lines:
                assert line.poly.evaluate(point) % p == 0


# -- serialization ----------------------------------------------------------------


def test_rule_json_round_trip():
    rules = [
        Axiom(0),
        LinComb(0, 1, 1, -2),
        LinComb(2, 2, Fraction(1, 2), 0),
        MulVar(2, x1),
        Sqrt(3),
    ]
    for rule in rules:
        assert rule_from_obj(rule_to_obj(rule)) == rule
    assert rule_to_obj(LinComb(0, 1, 1, -2)) == {
        "type": "lincomb",
        "j": 0,
        "k": 1,
        "alpha": "1",
        "beta": "-2",
    }


def test_proof_document_round_trip():
    axioms, lines = five_line_refutation()
    doc = proof_to_obj(Z, axioms, lines)
    kind2, axioms2, lines2 = proof_from_obj(doc)
    assert kind2 is Z and axioms2 == axioms and lines2 == lines
    assert doc["system"] == "pcsqrt-z"


def test_proof_document_rejects_unknown_system():
    axioms, lines = five_line_refutation()
    doc = proof_to_obj(Z, axioms, lines)
    doc["system"] = "resolution"
    with pytest.raises(Exception):
        proof_from_obj(doc)


def test_report_round_trip():
    axioms, lines = five_line_refutation()
    report = check_refutation(axioms, lines, Z)
    assert report_from_obj(report_to_obj(report)) == report
    bad = check_refutation(axioms, [ProofLine(P("x1"), Axiom(0))], Z)
    assert report_from_obj(report_to_obj(bad)) == bad
