"""Walk through the 13 directed-triangle classes.

Every unordered pair inside a 3-node group is in one of four states
(none / forward / backward / mutual), so there are 4^3 = 64 labeled
configurations. 54 of them are weakly connected and collapse into 13
isomorphism classes; the remaining 10 count as "not a triangle".
"""

import itertools

from trimotif import CODES, PairState, TypeMappingTable, canonicalize, classify

# Classify a concrete configuration: a -> b, b -> a, a -> c.
states = (PairState.MUTUAL, PairState.FORWARD, PairState.NONE)
cls = classify(states)
print(f"(a<->b, a->c): code={cls.canonical_code} type={cls.motif_type} "
      f"arcs={cls.arc_count} mutual_dyads={cls.mutual_count}")

# Sweep all 64 labeled configurations and bucket them by class.
buckets = {}
for combo in itertools.product(tuple(PairState), repeat=3):
    buckets.setdefault(classify(combo).canonical_code, []).append(combo)

print(f"\n{len(buckets) - 1} connected classes "
      f"(+ {len(buckets['NOT_CONNECTED'])} disconnected configurations):")
mapping = TypeMappingTable.default()
print(f"{'code':>6} {'type':>4} {'orbit':>5}  canonical encoding")
for code in CODES:
    members = buckets[code]
    print(f"{code:>6} {mapping.type_of(code):>4} {len(members):>5}  "
          f"{canonicalize(members[0])}")

# Orbit sizes over the connected configurations must sum to 54.
total = sum(len(buckets[c]) for c in CODES)
print(f"\norbit sizes sum to {total} (expected 54)")

# Relabeling the three nodes never changes the class.
from trimotif.triads import permute_states

perm_ok = all(
    classify(permute_states(combo, perm)).canonical_code
    == classify(combo).canonical_code
    for combo in itertools.product(tuple(PairState), repeat=3)
    for perm in itertools.permutations(range(3)))
print(f"classification is permutation invariant: {perm_ok}")
