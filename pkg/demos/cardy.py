"""Operation templates on a small bundle, and the sign the Cardy identity picks up."""

from ainfcat.verify import (TEMPLATE_FIELDS, bundle_corruptions, cardy_sign, idempotent_bundle, verify_cardy,
                            verify_co_algebra, verify_oc_module)

B = idempotent_bundle()
for fn in (verify_co_algebra, verify_oc_module, verify_cardy):
    print(fn(B).to_text())

for n in range(5):
    print("n =", n, "sign", cardy_sign(n), "passes:", verify_cardy(B, n).passed)

caught = [verify_cardy(c).passed is False for _, c in bundle_corruptions(B, TEMPLATE_FIELDS["cardy"])]
print(f"cardy catches {sum(caught)} of {len(caught)} single-sign corruptions")
