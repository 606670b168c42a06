"""A diamond whose two atoms sit below the bottom fails the join law.

Run: python demos/failing_join_law.py
"""
from spectopo import fixtures as fx
from spectopo.folang import builtin, evaluate
from spectopo.spec import check_axioms

s = fx.diamond_spec_semilattice()
report = check_axioms(s)
for law, verdict in report.laws.items():
    if verdict is None:
        continue
    note = "" if verdict.ok else "  witness " + ", ".join(s.names[i] for i in verdict.witness)
    print(f"{law}: {'holds' if verdict.ok else 'fails'}{note}")

# The same failure found by the model checker, with named witnesses.
r = evaluate(builtin("S3"), s)
print("model checker:", r.truth, r.names)
