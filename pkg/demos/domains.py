"""Facets of disc moduli and the degree of their orientation torsors."""

from ainfcat.domains import ainfty_term_bijection, boundary_strata, build_family, sigma_degree

for s in (3, 4, 5):
    F = build_family("mu", s=s)
    facets = boundary_strata(F)
    print(F.name, "dim", F.dim, "facets", len(facets), "degree", sigma_degree(F))
    for f in facets:
        print("  ", f.sign, f.name)

print(ainfty_term_bijection(4, 1, 0).to_text())
print("bubble:", sigma_degree(build_family("bub", bulk=2)))
