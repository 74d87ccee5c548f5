"""Translate a clausal proof over linear equations into an algebraic one.

The clausal side refutes the pair of unit clauses {x = 0} and {x = 1} in
four lines: resolve the two equations into 0 = -1, then simplify the false
equation away to reach the empty disjunction.  The translator encodes each
disjunction as a product of fresh extension variables (one per distinct
equation) and replays every clausal rule as a short algebraic derivation.
"""

from polycal import (
    Disjunction,
    LinEq,
    SystemKind,
    check_refutation,
    check_reslin,
    simulate_reslin_b,
    xvar,
)
from polycal.proofcore import Sqrt
from polycal.reslin import (
    RlAxiom,
    RlContraction,
    RlLine,
    RlResolution,
    RlSimplification,
    RlWeakening,
)

x1 = xvar(1)
is_zero = LinEq.of({x1: 1}, 0)
is_one = LinEq.of({x1: 1}, 1)
axioms = [Disjunction.of(is_zero), Disjunction.of(is_one)]

proof = [
    RlLine(Disjunction.of(is_zero), RlAxiom(0)),
    RlLine(Disjunction.of(is_one), RlAxiom(1)),
    RlLine(Disjunction.of(LinEq.of({}, -1)), RlResolution(0, 1, 0, 0, 1, -1)),
    RlLine(Disjunction.empty(), RlSimplification(2, 0)),
]
assert check_reslin(axioms, proof).valid
print("clausal refutation of {x=0}, {x=1}:")
for i, line in enumerate(proof):
    shown = ", ".join(str(eq) for eq in line.disjunction.disjuncts) or "empty"
    print(f"  {i}: [{shown}]")

out = simulate_reslin_b(axioms, proof)
report = check_refutation(out.axioms, list(out.proof), SystemKind.EXTPCSQRT_Q)
assert report.valid and report.final_constant == 1
print(f"\ntranslated: {report.line_count} algebraic lines, final constant 1")
print("extension definitions (one product variable per registered equation):")
for ext in out.axioms.extensions:
    print(f"  {ext.var.name} := {ext.definition}")
print("clausal line -> algebraic line:", dict(enumerate(out.line_map)))

# Contraction is the one clausal rule that needs a square root: merging a
# duplicated equation y*y collapses to y by taking the root of (y*tail)^2.
duplicated = [
    RlLine(Disjunction.of(is_zero), RlAxiom(0)),
    RlLine(Disjunction.of(is_zero, is_zero), RlWeakening(0, is_zero)),
    RlLine(Disjunction.of(is_zero), RlContraction(1, 0, 1)),
    RlLine(Disjunction.of(is_one), RlAxiom(1)),
    RlLine(Disjunction.of(LinEq.of({}, -1)), RlResolution(2, 3, 0, 0, 1, -1)),
    RlLine(Disjunction.empty(), RlSimplification(4, 0)),
]
assert check_reslin(axioms, duplicated).valid
out2 = simulate_reslin_b(axioms, duplicated)
assert check_refutation(out2.axioms, list(out2.proof), SystemKind.EXTPCSQRT_Q).valid
sqrt_lines = [i for i, pl in enumerate(out2.proof) if isinstance(pl.rule, Sqrt)]
print(f"\nwith a contraction in the input, square-root steps appear at "
      f"{sqrt_lines}")
print(f"(the contraction's image is line {out2.line_map[2]})")
