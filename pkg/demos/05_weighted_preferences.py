"""Finite domains with a preference order: non-optimal and settled values.

Pick at least one of three items, preferring cheaper-and-lighter baskets.
Item z is dominated (heavier and more expensive than both alternatives), so
z=1 appears only in non-optimal solutions and z settles at 0.  Choosing
between x and y stays with the user: x is lighter but more expensive.
"""

from confik import classify_values, optimal_solutions, parse_osd, solutions
from confik.osd import settled_refinements

problem = parse_osd(open(__file__.rsplit("/", 1)[0] + "/weighted.osd").read())

sols = solutions(problem)
print(f"{len(sols)} solutions:", sols)
print("optimal:", optimal_solutions(problem))

classification = classify_values(problem)
for i, name in enumerate(problem.names):
    row = ", ".join(
        f"{value}: {classification.status[(i, value)]}" for value in problem.domains[i]
    )
    print(f"  {name} -> {row}")

print("auto-assignable pins:", settled_refinements(problem))

# refining z=1 by hand flips the picture: now the cheapest z-basket wins
print("\nwith z pinned to 1:")
refined = classify_values(problem, [("z", 1)])
for i, name in enumerate(problem.names):
    row = ", ".join(
        f"{value}: {refined.status[(i, value)]}" for value in problem.domains[i]
    )
    print(f"  {name} -> {row}")
