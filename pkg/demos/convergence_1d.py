"""
Recovering a square-root singularity in 1-D
===========================================

The solution ``u = 2 sqrt(x)`` of ``u'' = f`` on ``[0, pi]`` has an unbounded
derivative at the left end, and plain central differences converge at
roughly half an order.  Subtracting ``k sqrt(x)`` inside ``x < 0.5`` leaves a
smooth problem, and the coefficient ``k`` is fitted along the way.
"""

from lowreg.harness import ExperimentConfig, format_report, run_experiment

n_list = (20, 40, 80, 160, 320, 640)

# The three-point scheme on the original equation.
baseline = run_experiment(ExperimentConfig("poisson1d-single", 2, "baseline-fd2", n_list))
print("central differences, no subtraction")
print(format_report(baseline, "md"))

# The interface formulation at second and fourth order.  The last column is
# the error in the recovered coefficient, whose exact value is 2.
for order in (2, 4):
    report = run_experiment(ExperimentConfig("poisson1d-single", order, "schur", n_list))
    print(f"interface formulation, order {order}")
    print(format_report(report, "md"))

# With two modes, x^(1/2) and x^(3/2), the dominant one is pinned down more
# sharply than the weaker one.
two = run_experiment(ExperimentConfig("poisson1d-two", 2, "schur", n_list))
print("two modes, order 2")
print(format_report(two, "md"))
