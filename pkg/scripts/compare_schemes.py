"""Compare the two per-vertex bag schemes of td_from_er_fr over every
spanning tree of the connected planar graphs on exactly N vertices."""
import argparse
import time

from koptd.corpus import connected_graphs
from koptd.graph import SpanningForest
from koptd.planarity import best_outer_face, require_embedding
from koptd.remember import iter_spanning_trees, remember_report
from koptd.treedec import td_from_er_fr, validate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("n", type=int, help="number of vertices (<= 7 is quick)")
    args = ap.parse_args()
    stats = {s: {"invalid": 0, "over_bound": 0, "trees": 0} for s in ("vface", "span")}
    t0 = time.time()
    for g in connected_graphs(args.n, planar=True):
        if g.n != args.n:
            continue
        emb = best_outer_face(require_embedding(g))
        for te in iter_spanning_trees(g):
            t = SpanningForest(g, te)
            r = remember_report(g, t, emb)
            bound = max(r.er + 1, 3 * r.fr)
            for scheme, st in stats.items():
                rep = validate(g, td_from_er_fr(g, t, emb, scheme=scheme))
                st["trees"] += 1
                st["invalid"] += not rep.valid
                st["over_bound"] += rep.width > bound
    for scheme, st in stats.items():
        print(f"{scheme:6s} trees={st['trees']} invalid={st['invalid']} over_bound={st['over_bound']}")
    print(f"{time.time() - t0:.1f}s")


if __name__ == "__main__":
    main()
