"""Build a small refutation by hand, check it, then break it on purpose.

The axioms say 2x - 1 = 0 (x is one half) and x^2 - x = 0 (x is boolean).
Together they are contradictory, and six lines reach the constant 1/2.
The second half of the script corrupts single lines and shows how the
checker pins each failure to a line index and a stable error code.
"""

from fractions import Fraction

from polycal import AxiomSet, ProofBuilder, SystemKind, check_refutation, poly_parse, xvar
from polycal.proofcore import ProofLine, Sqrt, check_step

axioms = AxiomSet(base=(poly_parse("2*x1 - 1"), poly_parse("x1^2 - x1")))
builder = ProofBuilder(axioms, SystemKind.PCSQRT_Q)

half = builder.axiom_line(0)            # 2x - 1
half_x = builder.mul_var(half, xvar(1))
square = builder.lincomb(half_x, half, 2, -1)   # 4x^2 - 4x + 1 = (2x-1)^2
root = builder.sqrt_of(square, poly_parse("2*x1 - 1"))
boolean = builder.axiom_line(1)
cross = builder.lincomb(half_x, boolean, 1, -2)  # x
builder.lincomb(root, cross, Fraction(-1, 2), 1)  # 1/2

proof = builder.lines
report = check_refutation(axioms, proof, SystemKind.PCSQRT_Q)
print("hand-built proof:")
for i, line in enumerate(proof):
    print(f"  {i}: {line.poly}")
print(f"valid: {report.valid}, final constant {report.final_constant}")
assert report.valid

# Square roots are sign-agnostic: in place of line 3, the negated root
# would also have been accepted (later lines would then need adjusting).
negated = ProofLine(poly_parse("1 - 2*x1"), Sqrt(square))
assert check_step(proof[:root], negated, axioms, SystemKind.PCSQRT_Q) is None
print("negated square root also accepted")

# Now break things.  Each mutation trips a different code, always at the
# first offending line.
print("\nmutations:")

corrupt = list(proof)
corrupt[cross] = ProofLine(poly_parse("7*x1"), corrupt[cross].rule)
bad = check_refutation(axioms, corrupt, SystemKind.PCSQRT_Q)
print(f"  wrong polynomial  -> {bad.error.code} at line {bad.error.line}")

# The same proof under the integer-only system: the 1/2 scalar is illegal.
bad = check_refutation(axioms, proof, SystemKind.PCSQRT_Z)
print(f"  integer system    -> {bad.error.code} at line {bad.error.line}")

# Square roots do not exist in the plain polynomial calculus.
bad = check_refutation(axioms, proof, SystemKind.PC_Q)
print(f"  sqrt-free system  -> {bad.error.code} at line {bad.error.line}")

truncated = proof[:-1]
bad = check_refutation(axioms, truncated, SystemKind.PCSQRT_Q)
print(f"  truncated proof   -> {bad.error.code} at line {bad.error.line}")
