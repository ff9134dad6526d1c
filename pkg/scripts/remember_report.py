"""Fraction of k-outerplanar graphs (n <= N) having a spanning tree with
er <= 2k and fr <= k, by outerplanarity index, measured over every tree."""
import argparse
import json

from koptd.corpus import connected_graphs
from koptd.fastcheck import scan_spanning_trees
from koptd.planarity import best_outer_face, outerplanarity_index, require_embedding


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()
    rows = {}
    for g in connected_graphs(args.n_max, planar=True):
        if g.n < 3:
            continue
        emb = best_outer_face(require_embedding(g))
        k = outerplanarity_index(g, emb)
        r = scan_spanning_trees(g, emb, k)
        row = rows.setdefault(k, {"graphs": 0, "meeting_both": 0, "er_le_2k": 0, "fr_le_k": 0,
                                  "max_min_fr": 0})
        row["graphs"] += 1
        row["meeting_both"] += r.both_ok
        row["er_le_2k"] += r.min_er <= 2 * k
        row["fr_le_k"] += r.min_fr <= k
        row["max_min_fr"] = max(row["max_min_fr"], r.min_fr)
    for k, row in sorted(rows.items()):
        row["fraction"] = round(row["meeting_both"] / row["graphs"], 4)
    print(json.dumps({str(k): v for k, v in sorted(rows.items())}, indent=2))


if __name__ == "__main__":
    main()
