"""CFR on a single deal.

On one fixed deal the abstract game is small: each player picks a pattern
at a few scheduled turns and the heuristic executors play the rest. CFR on
that tree should drive the average strategy towards equilibrium.
"""

from cfrp.abstraction import decode
from cfrp.cfr import NodeStore, average_strategy, build_tree, cfr_iteration, tree_size
from cfrp.tiles import shuffle_deal

deal = shuffle_deal(73)
decisions, leaves = tree_size(build_tree(deal))
print(f"deal 73: {decisions} decision nodes, {leaves} leaves")

store = NodeStore()
for _ in range(10_000):
    cfr_iteration(deal, store)

for node in store:
    f = decode(node.key)
    probs = average_strategy(node, node.legal_mask)
    print(f"key {node.key:7d} round={f.round:2d} pairs={f.pairs} pongs={f.pongs_kongs} "
          f"normal={probs[0]:.3f} pongpong={probs[1]:.3f} qidui={probs[2]:.3f}")
