"""Principalize a non-additive structure, then realise it inside a finite space.

Run: python demos/embed_into_space.py
"""
from spectopo import fixtures as fx
from spectopo.embed import principalize, topologize_full
from spectopo.spec import compute_kmap, is_additive

s = fx.nonadditive_principal()
print("K:", compute_kmap(s).named())
print("additive:", is_additive(s).ok)

p = principalize(s)
print(f"principalized to {p.structure.size} elements; additive now: {p.additive}")
print("certificate:", p.certificate.summary())

full = topologize_full(s)
space = full.space
print(f"space with {space.size} points and {len(space.closed)} closed sets")
for a, image in enumerate(full.composite.send):
    print(f"  {s.names[a]:>2} -> {space.name(image)}")
print("embedding certified:", full.certificate.is_embedding)
