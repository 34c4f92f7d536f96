"""Hochschild ranks of the dual numbers and the cohomology composition table."""

from ainfcat import corpus
from ainfcat.ainfty import check_ainfty, cohomology_category
from ainfcat.hoch import hh_compute

D = corpus.dual_numbers()
print(check_ainfty(D).to_text())

print("HH^*:", hh_compute(D, [0, 1, 2, 3], "cohomology").ranks)
print("HH_*:", hh_compute(D, [0, -1, -2, -3], "homology").ranks)

H = cohomology_category(corpus.dg_dual_numbers())
for row in H.table_rows():
    print(row)

# a wrong sign shows up as a located residual
mu = {k: dict(v) for k, v in D.mu.table.items()}
mu[("*", ("1", "x"))]["x"] = -mu[("*", ("1", "x"))]["x"]
print(check_ainfty(D.with_mu(mu)).to_text())
