"""Count small structures up to isomorphism and sweep the embedding pipeline.

Run: python demos/count_small_structures.py
"""
from spectopo.enumeration import (enum_moore_families, enum_posets,
                                  enum_spec_semilattices, enum_topologies,
                                  pipeline_sweep)

for n in range(6):
    print(f"posets on {n}: {len(enum_posets(n))}")
for m in range(4):
    print(f"closure systems on {m} labeled points: {len(enum_moore_families(m))}, "
          f"of which topologies: {len(enum_topologies(m))}")
for n in range(1, 5):
    print(f"spec-semilattices of size {n}: {len(enum_spec_semilattices(n))}")

for variant in ("character", "paper_literal"):
    print()
    print(pipeline_sweep("semilattice", 3, variant=variant).table())
