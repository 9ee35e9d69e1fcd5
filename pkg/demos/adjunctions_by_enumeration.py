"""
Adjunctions by exhaustive enumeration
=====================================

For one tiny random instance, list both hom-sets of every adjunction and
check that the unit and counit give mutually inverse bijections.
"""

from starsheaf.generate import case_seed
from starsheaf.properties import adjunction_suite

for seed_index in range(3):
    print(f"instance {seed_index}")
    for c in adjunction_suite(case_seed(7, seed_index)):
        status = "ok" if c.ok else "BROKEN"
        print(f"  {c.name:24s} {c.left_count:3d} <-> {c.right_count:3d}  {status}")
