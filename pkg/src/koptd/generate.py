"""Deterministic random k-outerplanar instances with their intended embedding.

The skeleton is k nested rings (cycles; the innermost ring may be a single
vertex).  Between consecutive rings a random subset of the spokes of a
"zipper" triangulation of the annulus is kept, and chords are added on the
inner side of a ring wherever they cannot meet a spoke.  Peeling the outer
ring of this drawing k times empties the graph, so the stripping layers of
the emitted embedding are exactly the rings.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import GraphError
from .graph import Graph, build_graph, is_connected, is_l_connected
from .planarity import PlanarEmbedding, embed


class Infeasible(GraphError):
    pass


@dataclass(frozen=True)
class GenConfig:
    n: int
    k: int
    seed: int = 0
    min_spokes: int = 1          # per annulus; 2 gives a 2-connected graph
    spoke_prob: float = 0.5
    chord_prob: float = 0.3
    pendants: int = 0            # extra degree-1 vertices in the outer face
    single_center_prob: float = 0.3


@dataclass(frozen=True)
class Generated:
    graph: Graph
    rotation: dict[int, tuple[int, ...]] = field(compare=False)
    layers: tuple[frozenset[int], ...]
    config: GenConfig | None = None

    def embedding(self) -> PlanarEmbedding:
        emb = embed(self.graph, self.rotation)
        first = self.layers[0]
        ring = frozenset(v for v in first if len(self.rotation[v]) > 1 or len(first) <= 2)
        outer = [f for f in emb.faces if ring <= f.boundary_vertices <= first]
        # prefer the face also holding the pendants (they sit outside ring 1)
        outer.sort(key=lambda f: (-len(f.walk), f.id))
        return emb.with_outer_face(outer[0].id)


def _ring_sizes(rng: random.Random, n: int, k: int, single_center: bool) -> list[int]:
    if k == 1:
        if n < 3:
            raise Infeasible("need n >= 3")
        return [n]
    inner = 1 if single_center else 3
    need = 3 * (k - 1) + inner
    if n < need:
        if n >= 3 * (k - 1) + 1:
            inner, need = 1, 3 * (k - 1) + 1
        else:
            raise Infeasible(f"n={n} too small for {k} layers")
    sizes = [3] * (k - 1) + [inner]
    extra = n - need
    slots = list(range(k - 1)) + ([k - 1] if inner >= 3 else [])
    for _ in range(extra):
        sizes[rng.choice(slots)] += 1
    return sizes


def _zipper(outer: list[int], inner: list[int], angle: dict[int, float]):
    """Spokes of the annulus triangulation; each spoke carries its event index."""
    seq = sorted(outer + inner, key=lambda v: (angle[v], v))
    in_outer = set(outer)
    events = {v: i for i, v in enumerate(seq)}
    cur_a = next(v for v in reversed(seq) if v in in_outer)
    cur_b = next(v for v in reversed(seq) if v not in in_outer)
    spokes: dict[tuple[int, int], int] = {(cur_a, cur_b): len(seq) - 1}
    for i, x in enumerate(seq):
        if x in in_outer:
            cur_a = x
        else:
            cur_b = x
        spokes.setdefault((cur_a, cur_b), i)
    return spokes, events, len(seq)


def _chords(rng: random.Random, s: int, blocked: set[int], prob: float) -> list[tuple[int, int]]:
    """Random laminar family of chords (a, b), 0 <= a < b < s, b - a >= 2,
    not (0, s-1), with no blocked position strictly inside."""
    cand = [(a, b) for a in range(s) for b in range(a + 2, s)
            if (a, b) != (0, s - 1) and not any(a < x < b for x in blocked)]
    rng.shuffle(cand)
    chosen: list[tuple[int, int]] = []
    for a, b in cand:
        if rng.random() >= prob:
            continue
        if all(b <= c or d <= a or (c <= a and b <= d) or (a <= c and d <= b)
               for c, d in chosen):
            chosen.append((a, b))
    return sorted(chosen)


def generate(cfg: GenConfig) -> Generated:
    rng = random.Random(cfg.seed)
    single = cfg.k > 1 and rng.random() < cfg.single_center_prob
    sizes = _ring_sizes(rng, cfg.n, cfg.k, single)
    rings: list[list[int]] = []
    nxt = 0
    angle: dict[int, float] = {}
    for s in sizes:
        off = rng.random()
        ring = list(range(nxt, nxt + s))
        for j, v in enumerate(ring):
            angle[v] = ((j + off) / s) % 1.0
        rings.append(ring)
        nxt += s
    edges: set[tuple[int, int]] = set()
    pos = {v: j for ring in rings for j, v in enumerate(ring)}
    ring_of = {v: i for i, ring in enumerate(rings) for v in ring}
    for ring in rings:
        if len(ring) >= 3:
            edges.update(tuple(sorted((ring[j], ring[(j + 1) % len(ring)]))) for j in range(len(ring)))
    inward: dict[int, list[tuple[int, int]]] = {v: [] for v in angle}     # (offset, target)
    outward: dict[int, list[tuple[int, int]]] = {v: [] for v in angle}
    for i in range(len(rings) - 1):
        spokes, events, big_n = _zipper(rings[i], rings[i + 1], angle)
        items = sorted(spokes.items(), key=lambda kv: kv[1])
        keep = [sp for sp in items if rng.random() < cfg.spoke_prob]
        need = min(cfg.min_spokes, len(items))
        rest = [sp for sp in items if sp not in keep]
        rng.shuffle(rest)

        def spread(ks):
            # min_spokes distinct endpoints on each ring (as far as possible)
            a = {x for (x, _), _ in ks}
            b = {y for (_, y), _ in ks}
            return (len(ks) >= need and len(a) >= min(need, len(rings[i]))
                    and len(b) >= min(need, len(rings[i + 1])))

        while not spread(keep) and rest:
            keep.append(rest.pop())
        keep.sort(key=lambda kv: kv[1])
        for (a, b), ev in keep:
            edges.add(tuple(sorted((a, b))))
            inward[a].append(((ev - events[a]) % big_n, b))
            outward[b].append(((ev - events[b]) % big_n, a))
    chords: dict[int, list[tuple[int, int]]] = {}
    for i, ring in enumerate(rings):
        if len(ring) < 4:
            continue
        blocked = {pos[v] for v in ring if inward[v]}
        if i == len(rings) - 1:
            blocked = set()
        chords[i] = _chords(rng, len(ring), blocked, cfg.chord_prob)
        for a, b in chords[i]:
            edges.add((ring[a], ring[b]))
    fwd: dict[int, list[int]] = {v: [] for v in angle}
    bwd: dict[int, list[int]] = {v: [] for v in angle}
    for i, cs in chords.items():
        ring = rings[i]
        for a, b in cs:
            fwd[ring[a]].append(ring[b])
            bwd[ring[b]].append(ring[a])
    rot: dict[int, list[int]] = {}
    for i, ring in enumerate(rings):
        s = len(ring)
        for j, v in enumerate(ring):
            order: list[int] = []
            if s >= 3:
                order.append(ring[(j + 1) % s])
            order += sorted(fwd[v], key=lambda w: pos[w])
            order += [w for _, w in sorted(inward[v], reverse=True)]
            order += sorted(bwd[v], key=lambda w: pos[w])
            if s >= 3:
                order.append(ring[(j - 1) % s])
            order += [w for _, w in sorted(outward[v])]
            rot[v] = order
    # pendant vertices hang into the outer face from ring 1
    for p in range(cfg.pendants):
        v = nxt + p
        host = rng.choice(rings[0])
        edges.add((host, v))
        rot[host].append(v)
        rot[v] = [host]
        angle[v] = angle[host]
    g = build_graph(sorted(rot), sorted(edges))
    rotation = {v: tuple(ns) for v, ns in rot.items()}
    emb = PlanarEmbedding(g, rotation, 0)
    if not emb.is_valid():
        raise AssertionError("generator produced an inconsistent rotation system")
    layers = [frozenset(r) for r in rings]
    layers[0] = layers[0] | frozenset(range(nxt, nxt + cfg.pendants))
    return Generated(g, rotation, tuple(layers), cfg)


def generate_kop(n: int, k: int, seed: int, **kw) -> Generated:
    return generate(GenConfig(n=n, k=k, seed=seed, **kw))


def generate_2connected(n: int, k: int, seed: int, **kw) -> Generated:
    kw.setdefault("min_spokes", 2)
    return generate(GenConfig(n=n, k=k, seed=seed, **kw))


def generate_3connected(n: int, seed: int, max_tries: int = 200, thin: bool = True) -> Generated:
    """A 3-connected planar instance: dense ring graphs filtered for
    3-connectivity, then (optionally) thinned by deleting random edges that
    keep it 3-connected."""
    rng = random.Random(seed)
    for attempt in range(max_tries):
        k = rng.choice([2, 2, 3]) if n >= 7 else 2
        try:
            gen = generate(GenConfig(n=n, k=k, seed=rng.randrange(1 << 30), min_spokes=3,
                                     spoke_prob=0.9, chord_prob=0.6, single_center_prob=0.5))
        except Infeasible:
            continue
        g = gen.graph
        if not is_l_connected(g, 3):
            continue
        if thin:
            es = list(g.edges)
            rng.shuffle(es)
            for e in es[: len(es) // 3]:
                h = Graph(g.vertices, tuple(x for x in g.edges if x != e))
                if min(h.degree(v) for v in h.vertices) >= 3 and is_l_connected(h, 3):
                    g = h
        rot = {v: tuple(w for w in gen.rotation[v] if g.has_edge(v, w)) for v in g.vertices}
        return Generated(g, rot, gen.layers, gen.config)
    raise Infeasible(f"no 3-connected instance found for n={n}")
