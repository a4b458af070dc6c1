# The archimedean side: oscillatory integrals and Li_f
# ====================================================
#
# The other half of every prediction is an integral over the box: the
# oscillatory integral I(B; gamma) for the analytic machinery, and the
# logarithmic integral Li_f(P*B) that plays the role of Li(x) from the
# prime number theorem.

import math

from polydensity import (
    Box,
    laurent_expansion,
    li_f,
    log_moment,
    oscillatory_integral,
    parse_polynomial,
)

f0 = parse_polynomial("x1^2 + x2^2", 2)
box = Box([(1, 2), (1, 2)])

# At gamma = 0 the oscillatory integral is just the volume of the box.
print("I(B; 0)  =", oscillatory_integral(f0, box, 0.0).value)

# As |gamma| grows the phases cancel and the integral decays.
for gamma in (1.0, 10.0, 100.0):
    value = oscillatory_integral(f0, box, gamma).value
    print(f"|I(B; {gamma:5.1f})| = {abs(value):.6f}")

# Li_f integrates 1/log f(x) over the scaled box.  For f = x1 on [2,3]
# this is the classical logarithmic integral over [2P, 3P].
linear = parse_polynomial("x1", 1)
li = li_f(linear, Box([(2, 3)]), 10**4)
print("\nLi for x1 on [2e4, 3e4] =", li.value)

# The leading behaviour is vol(B) P^n / (d log P); the full (log P)^{-1}
# expansion is available with a rigorous tail bound.
quad = parse_polynomial("x1^2", 1)
box1 = Box([(1, 2)])
li_exact = li_f(quad, box1, 10**3).value
print("\nLi via quadrature  =", li_exact)
for K in (2, 4, 8):
    value, bound = laurent_expansion(quad, box1, 10**3, K)
    print(f"  K={K}: expansion = {value:.6f}  tail bound = {bound:.2e}")

# The expansion coefficients are log-moments J(k) of the top form.
print("\nJ(1) for x1^2 on [1,2] =", log_moment(quad, box1, 1).value)
print("closed form 2(2 log 2 - 1) =", 2 * (2 * math.log(2) - 1))
