"""A greedy base whose two membership tests disagree, and finite-type
systems that approximate it from inside."""

from betaflow import EPWord, LOWER, Params, expansion, max_real_root_in
from betaflow.correspondence import approximants, membership_A, membership_B, rho_inf

beta = max_real_root_in((1, 1, -2, -1, -1, 1), 1, 2)
params = Params(beta, 0)
print(f"beta = {float(beta):.12f}")
print("expansion of 1:", expansion(params, 1, LOWER, require_period=True))

xi = EPWord.parse("00(011)")
print(f"xi = {xi}")
print("  dynamical test:", membership_B(beta, xi))
print("  block test:    ", membership_A(beta, xi))
print(f"  rho = {float(rho_inf(beta)):.6f}")

print("\nfinite-type systems inside:")
for a in approximants(params, 3):
    print(f"  beta = {float(a.params.beta):.9f}  alpha = {float(a.params.alpha):.9f}  "
          f"agree = {a.agreement:>2}  ({a.lower}, {a.upper})")
