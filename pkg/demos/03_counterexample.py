"""Monotonicity and one-sided approximation break down in infinitely many variables.

At t = (1, ..., 1, 0.5, 0.5, 0, ...) with n leading ones, the weighted
square sum fbar(t) = sum_j t_j^2 / 2^j sits strictly above L_n(fbar)(t),
and L_{n+1}(fbar)(t) sits above L_n(fbar)(t): both gaps are positive.
"""

from approxop.experiments import parse_spec, run_experiment

spec = parse_spec({"point": {"head": [0.5, 0.5]}, "n_list": [1, 2, 3, 4, 5, 6]}, "counterexample")
res = run_experiment(spec)
print(f"{'n':>3} {'fbar - L_n fbar':>18} {'L_(n+1) - L_n':>18} {'grid check':>12}")
for row in res.rows:
    grid = "ok" if row["gap_4_enum"] is not None and abs(row["gap_4_enum"] - row["gap_4"]) < 1e-12 else "-"
    print(f"{row['n']:>3} {row['gap_4']:>18.12f} {row['gap_5']:>18.12f} {grid:>12}")
