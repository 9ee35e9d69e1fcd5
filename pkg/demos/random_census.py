"""
A census of random sheaves
==========================

Draw seeded random instances and count how often each class occurs. The
ladders are checked internally by every call to classify.
"""

from collections import Counter

from starsheaf import star as S
from starsheaf.generate import case_seed, random_instance

MASTER = 2026
counts = Counter()
components = Counter()
for i in range(300):
    ctx, D = random_instance(case_seed(MASTER, i))
    r = S.classify(ctx, D)
    kind = "set" if r.is_set else "et" if r.is_et else "star only"
    counts[kind] += 1
    components[r.pi0_size] += 1

print("classes:", dict(counts))
print("number of components:", dict(sorted(components.items())))

# without the inertia condition the ladders still agree; et needs star as well
non_star = Counter()
for i in range(100):
    ctx, D = random_instance(case_seed(MASTER + 1, i), star=False)
    r = S.classify(ctx, D)
    non_star[(r.is_star, all(r.ladder3.values()))] += 1
print("(star, ladder3) without inertia check:", dict(non_star))
