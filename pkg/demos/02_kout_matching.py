"""Why three random proposals per edge are enough: the k-out experiment.

Each left vertex of a random bipartite graph picks k=3 distinct uniform
partners on a right side of size ceil(c * n). Perfect matchings exist
essentially always once c clears e = 2.718..., and that is exactly the
margin the streaming colorer's period (2.72 * delta) buys. Below e, the
matching collapses. The sweep makes the threshold visible.
"""

from streamcolor import run_kout_experiment

N, TRIALS, SEED = 50, 4000, 11

print(f"n = {N} left vertices, k = 3 picks each, {TRIALS} trials per point")
print(f"{'c':>6} {'|U|':>5} {'failure rate':>13} {'95% interval':>22}")
for c in ("1.0", "1.2", "1.5", "2.0", "2.72", "3.5"):
    res = run_kout_experiment(N, c, 3, trials=TRIALS, seed=SEED)
    low, high = res.wilson()
    print(f"{c:>6} {res.u_size:>5} {res.rate:>13.4f}   [{low:.5f}, {high:.5f}]")

print("\ntiny left sides cannot fail at all (any <=3 vertices see 3 distinct partners):")
for n in (1, 2, 3):
    res = run_kout_experiment(n, "3", 3, trials=2000, seed=n)
    print(f"  n={n}: failures = {res.failures} / {res.trials}")
