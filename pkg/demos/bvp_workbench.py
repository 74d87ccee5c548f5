"""Walk the binary value workbench end to end at a desk-friendly size.

The instance at width n says that 1 + x1 + 2 x2 + ... + 2^(n-1) xn equals
zero, which no 0/1 point satisfies.  The generator below refutes it over
the integers by brute force, and the refutation is then audited two ways:
every small prime must divide its final constant, and evaluating the whole
proof at a boolean point must give residues that vanish modulo a prime.
"""

from polycal import (
    SystemKind,
    audit_divisibility,
    brute_force_refutation,
    check_refutation,
    factorial_bits,
    gen_bvp,
)
from polycal.bvp import is_prime, trace_mod_check

N = 3

instance = gen_bvp(N)
print(f"width {N} instance, base axioms:")
for poly in (instance.equation,) + instance.booleans:
    print(f"  {poly} = 0")

axioms, proof = brute_force_refutation(N)
report = check_refutation(axioms, proof, SystemKind.PCSQRT_Z)
assert report.valid
print(f"\nrefutation: {report.line_count} lines, degree {report.degree},")
print(f"final constant {report.final_constant} (that is (2^{N})! exactly)")

# The punchline of the construction: the final constant cannot be small,
# because every prime up to 2^n must divide it.
audit = audit_divisibility(int(report.final_constant), N)
print(f"\ndivisibility audit (constant needs >= {audit.bit_length} bits):")
for check in audit.checks:
    print(f"  prime {check.prime}: {'divides' if check.divides else 'MISSING'}")
assert audit.all_divide

# Per-prime certificate: fix k with k + 1 prime, evaluate every line at the
# 0/1 point encoding k, and watch the residues vanish mod k + 1.
for k in range(1 << N):
    if not is_prime(k + 1):
        continue
    trace = trace_mod_check(axioms, proof, N, k)
    bits = "".join(str(b) for _, b in trace.assignment)
    print(f"k={k} (bits {bits}, mod {trace.modulus}): all residues zero: "
          f"{trace.all_zero}")
    assert trace.all_zero

print(f"\nbit growth: (2^n)! needs {factorial_bits(1 << N)} bits at n={N}, "
      f"{factorial_bits(1 << (N + 1))} at n={N + 1}")
