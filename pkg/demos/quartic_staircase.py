"""Recover a system from its kneading pair, look at its Markov partition,
move it to the golden greedy map and draw its dimension staircase.

Writes quartic_staircase.csv next to this script; with matplotlib installed
it also saves quartic_staircase.png.
"""

from pathlib import Path

from betaflow import EPWord
from betaflow.correspondence import to_hole_system
from betaflow.kneading import system_from_kneading_pair
from betaflow.numerics import format_element, format_poly
from betaflow.sft import characteristic_polynomial, compile, emit_csv
from betaflow.survivor import critical_hole, dimension_sweep, sweep_csv

params = system_from_kneading_pair(EPWord.parse("0(10)"), EPWord.parse("1(0001)"))
print(f"beta  = {float(params.beta):.10f}   minimal polynomial {format_poly(params.beta_real.minpoly)}")
print(f"alpha = {float(params.alpha):.10f}   = {format_element(params.alpha)}")

system = compile(params)
print("\nadjacency matrix\n" + emit_csv(system))
print("characteristic polynomial:", format_poly(characteristic_polynomial(system)))

hole = to_hole_system(params)
print(f"\ngreedy base {float(hole.beta_prime):.10f}, hole [0, {float(hole.hole_t):.10f})")
print(f"critical hole {float(critical_hole(params)):.12f}")

rows = dimension_sweep(params, 120)
out = Path(__file__).with_name("quartic_staircase.csv")
out.write_text(sweep_csv(rows))
print(f"\nwrote {len(rows)} rows to {out.name}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    pass
else:
    pts = [(float(r.t), r.eta_kneading) for r in rows if r.eta_kneading is not None]
    cnt = [(float(r.t), r.eta_counting) for r in rows if r.eta_counting is not None]
    plt.step(*zip(*pts), where="post", label="kneading")
    plt.plot(*zip(*cnt), ".", ms=3, label="counting")
    plt.xlabel("t")
    plt.ylabel("dim K(t)")
    plt.legend()
    plt.savefig(out.with_suffix(".png"), dpi=120)
    print(f"saved {out.with_suffix('.png').name}")
