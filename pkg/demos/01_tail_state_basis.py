"""Tour of the soft truncation: how one coherent-tail state extends a
hard occupation cutoff.

Run: python3 demos/01_tail_state_basis.py
"""

import math

import numpy as np

from bosetail import basis

np.set_printoptions(precision=4, suppress=True, linewidth=120)

# A hard cutoff keeps |0..n_c-1|. The soft truncation appends one state
# carrying the entire n >= n_c tail of a coherent state with amplitude
# alpha, normalized and orthogonal to everything retained.
n_c, alpha = 4, 1.3

hard = basis.build_operators(basis.fock(n_c))
soft = basis.build_operators(basis.cts(n_c, alpha))

print(f"hard cutoff: dim {hard.dim};  tail-extended: dim {soft.dim}")
print("\nannihilator in the extended basis (last column is the tail state):")
print(soft.b)

# The annihilator maps the tail state back INTO the basis exactly:
# b|tail> = hop |n_c-1> + alpha |tail>. Check the column norm against the
# exact occupation moment.
col = soft.b[:, -1]
n_mean, nn_mean = basis.cts_moments(alpha, n_c)
print(f"\n<tail|b^dag b|tail> from moments: {n_mean:.12f}")
print(f"in-basis column norm of b|tail>:  {float(col @ col):.12f}")

# The creator is different: it pushes weight out of the basis, so its
# projected column norm falls short of n_mean + 1.
col_dag = soft.b_dag[:, -1]
print(f"\n<tail|b b^dag|tail> exact:        {n_mean + 1.0:.6f}")
print(f"projected creator column norm:    {float(col_dag @ col_dag):.6f}")

# As alpha -> 0 the tail state degenerates to the number state |n_c| and
# the extended basis becomes the hard cutoff with one more state.
tiny = basis.build_operators(basis.cts(n_c, 1e-8))
ref = basis.build_operators(basis.fock(n_c + 1))
dev = max(np.max(np.abs(tiny.n - ref.n)), np.max(np.abs(tiny.nn - ref.nn)))
print(f"\nalpha=1e-8 vs hard cutoff of {n_c + 1} states: "
      f"max moment deviation {dev:.2e}")

# Moments vs direct series summation of the defining coherent tail.
def tail_sum(weight):
    a2 = alpha * alpha
    t = a2 ** n_c / math.factorial(n_c)
    total = 0.0
    for n in range(n_c, n_c + 200):
        total += weight(n) * t
        t *= a2 / (n + 1)
    return total

s = tail_sum(lambda n: 1.0)
print(f"\nseries check: n_mean  closed {n_mean:.12f} vs series "
      f"{tail_sum(lambda n: n) / s:.12f}")
print(f"series check: nn_mean closed {nn_mean:.12f} vs series "
      f"{tail_sum(lambda n: n * (n - 1)) / s:.12f}")
