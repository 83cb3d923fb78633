"""How far can water come from, and how far must it?

A small walk through potential and persistent watersheds on the named
fixtures, ending with the terrain on which persistent watersheds do not nest.
"""

from impreciseflow import (
    persistent_watershed,
    potential_downstream,
    potential_watershed,
    watershed,
)
from impreciseflow.fixtures import chain_pit, counter_nesting, disconnected_persistent


def names(ids, nodes):
    inv = {v: k for k, v in ids.items()}
    return "{" + ", ".join(inv[int(i)] for i in nodes.ids) + "}"


t, ids = chain_pit()
print("chain a[5,5] - b[2,4] - c[0,1]")
pw = potential_watershed(t, [ids["c"]])
print("  PoWS(c)            ", names(ids, pw.members))
print("  canonical elevations", dict(zip("abc", pw.elevation.tolist())))
# the canonical realization is an actual witness
print("  WS under it        ", names(ids, watershed(t, pw.elevation, [ids["c"]])))
print("  PoDel(a)           ", names(ids, potential_downstream(t, [ids["a"]]).members))
print()

t, ids = disconnected_persistent()
e = ids["e"]
print("a regular terrain where the persistent watershed falls apart")
print("  PoWS(e)", names(ids, potential_watershed(t, [e]).members))
print("  PsWS(e)", names(ids, persistent_watershed(t, [e])), " (c and e are not adjacent)")
print()

t, ids = counter_nesting()
print("a non-regular terrain")
for x in "pq":
    q = ids[x]
    print(f"  PoWS({x}) = {names(ids, potential_watershed(t, [q]).members):<24}"
          f"PsWS({x}) = {names(ids, persistent_watershed(t, [q]))}")
ps_p = persistent_watershed(t, [ids["p"]])
ps_q = persistent_watershed(t, [ids["q"]])
print("  p in PsWS(q):", ids["p"] in ps_q, "  PsWS(p) inside PsWS(q):", ps_p <= ps_q)
