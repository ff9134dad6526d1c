"""Rebuild the shipped corpus of connected planar graphs on 8 vertices."""
import argparse
import time
from pathlib import Path

import networkx as nx

from koptd.corpus import N8_FILE, PLANAR_CONNECTED_COUNTS, connected_nx, extend_planar


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "src/koptd/data" / N8_FILE))
    args = ap.parse_args()
    t0 = time.time()
    graphs = extend_planar(connected_nx(7, planar=True))
    assert len(graphs) == PLANAR_CONNECTED_COUNTS[8], len(graphs)
    lines = sorted(nx.to_graph6_bytes(h, header=False).strip().decode() for h in graphs)
    Path(args.out).write_text("\n".join(lines) + "\n")
    print(f"{len(lines)} graphs -> {args.out} ({time.time() - t0:.1f}s)")


if __name__ == "__main__":
    main()
