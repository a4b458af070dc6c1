# Complete exponential sums and the identities behind the predictions
# ===================================================================
#
# The machinery that justifies the Euler products runs through complete
# exponential sums S_{a,q} = sum over x mod q of e(a f(x)/q).  This script
# shows their headline properties and two exact identities that tie the
# analytic and counting sides together.

import math

from polydensity import (
    Box,
    ExpSumTable,
    big_g,
    big_g_from_definition,
    complete_exp_sum,
    observatory_check,
    orthogonality_count,
    parse_polynomial,
    t_f,
)

f = parse_polynomial("x1^2", 1)

# Gauss sums: |S_{1,p}| = sqrt(p) for odd primes.
for p in (5, 13, 29):
    print(f"|S_1,{p}| = {abs(complete_exp_sum(f, 1, p)):.6f}   sqrt = {math.sqrt(p):.6f}")

# A full table over the residues coprime to q:
table = ExpSumTable.build(parse_polynomial("x1^2 + x2^2", 2), 5)
for a, value in sorted(table.values.items()):
    print(f"S_{a},5 = {value:.4f}")

# T_f(q) averages |S_{a,q}| and is multiplicative in q.
g = parse_polynomial("x1^3 + 2*x1", 1)
print("\nT(12) =", t_f(g, 12), " T(3)T(4) =", t_f(g, 3) * t_f(g, 4))

# G(q) drives the squarefree singular series; the closed form agrees with
# the defining sum exactly as rationals, and vanishes off cube-free q.
print("\nG(6) closed form =", big_g(6), " from definition =", big_g_from_definition(6))
print("G(8) =", big_g(8), "(8 is not cube-free)")

# Orthogonality: averaging the trig polynomials over phases recovers the
# exhaustive prime count exactly.
h = parse_polynomial("x1^2 + x2^2", 2)
box = Box([(1, 2), (1, 2)])
print("\northogonality count at P=3 =", orthogonality_count(h, box, 3))

# Observatory identity: a closed-form cross-check between the exponential
# sums at one prime and the local zero count.
lhs, rhs = observatory_check(h, 7)
print("observatory identity at p=7:", lhs, "==", rhs)
