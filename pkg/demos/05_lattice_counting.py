# Exhaustive lattice counting
# ===========================
#
# The empirical side of every experiment: enumerate all integer points of
# the scaled box, evaluate the polynomial exactly, and test each value
# for primality or squarefreeness.  Counts are exact and deterministic
# regardless of the thread count.

import time

from polydensity import Box, count_values, parse_polynomial

f = parse_polynomial("x1^2 + x2^2", 2)
box = Box([(1, 2), (1, 2)])

# Prime values of x^2 + y^2 over growing boxes.
for P in (10, 100, 1000):
    result = count_values(f, box, P, mode="prime")
    print(
        f"P={P:5d}: {result.count:7d} prime values among "
        f"{result.lattice_points} lattice points"
    )

# Squarefree values approach a constant density.
for P in (100, 1000):
    result = count_values(f, box, P, mode="squarefree")
    print(f"P={P:5d}: squarefree density = {result.count / result.lattice_points:.5f}")

# Joint mode counts points where several polynomials are simultaneously
# prime — here, twin primes in [2P, 3P].
f1, f2 = parse_polynomial("x1", 1), parse_polynomial("x1 + 2", 1)
twins = count_values([f1, f2], Box([(2, 3)]), 10**5, mode="joint")
print("\ntwin prime pairs with smaller member in [2e5, 3e5]:", twins.count)

# Threads change the wall time, never the answer.
big = Box([(1, 2), (1, 2)])
for threads in (1, 4):
    t0 = time.perf_counter()
    result = count_values(f, big, 2000, mode="squarefree", threads=threads)
    dt = time.perf_counter() - t0
    print(f"threads={threads}: count={result.count}  ({dt:.2f}s)")
