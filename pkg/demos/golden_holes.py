"""Holes in the golden greedy map: exact dimensions against the sampling
estimates."""

from betaflow import EPWord, Params, golden, project_pi
from betaflow.oracles import box_counting_dim, escape_fraction
from betaflow.survivor import critical_hole, eta, in_bifurcation_set

params = Params(golden(), 0)
tc = critical_hole(params)
print(f"critical hole {float(tc):.12f} (= 2 - G)")

print(f"\n{'hole word':>12} {'t':>10} {'exact':>8} {'boxes':>8}")
for text in ["(00001)", "(0001)", "(001)", "(00101)", "(0010101)"]:
    t = project_pi(params, EPWord.parse(text))
    assert in_bifurcation_set(params, t)
    print(f"{text:>12} {float(t):10.6f} {eta(params, t):8.4f} {box_counting_dim(params, t):8.4f}")

print("\nshare of random points that fall into [0, t) within 1000 steps")
for t in [0.001, 0.01, 0.1]:
    print(f"  t = {t:<6} {escape_fraction(params, t, samples=50_000, steps=1000, seed=1):.4f}")
