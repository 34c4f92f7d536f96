"""Solve the Maurer-Cartan equation on a curved toy and build its bounding-cochain category."""

from ainfcat import corpus
from ainfcat.ainfty import check_ainfty
from ainfcat.bc import bc_category, curvature, solve_mc

C = corpus.curved_toy(6)
print("curvature at b = 0:", curvature(C, "*", {}))

res = solve_mc(C, "*", 6)
print("solved:", res.solved, "b =", res.solution)
for o in res.as_dict()["orders"]:
    print("  ", o)

B = bc_category(C, {"L": ("*", res.solution)})
print("curved:", B.is_curved())
print(check_ainfty(B, trunc=6, max_len=4).to_text())

obs = solve_mc(corpus.obstructed_toy(6), "*", 6)
print("obstructed toy, first obstruction:", obs.obstruction)
