"""Decorated rooted JSJ trees of knot complements.

Each vertex is a JSJ piece of one of four kinds: an r-key-chain link
complement, a torus-knot complement, a cable space, or a hyperbolic piece
looked up in a user-supplied catalog.  The root holds the knot's boundary
torus; each edge glues a child's outer boundary into a slot of its parent.

An edge is addressed by the id of its child node.  The empty tree stands
for the unknot complement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Union

from .bounds import DEFAULT_DPS, torsion_cap, volume_within_bound
from .errors import InputError, certify


# ------------------------------------------------------------------- kinds

@dataclass(frozen=True)
class KeyChain:
    r: int

    def __post_init__(self):
        if self.r < 2:
            raise InputError(f"key-chain needs r > 1, got {self.r}")


@dataclass(frozen=True)
class TorusKnot:
    """Torus-knot complement, stored with ``|p| > q >= 2`` and the sign on ``p``."""

    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if p == 0 or q == 0:
            raise InputError("torus knot parameters must be nonzero")
        sign = 1 if (p > 0) == (q > 0) else -1
        big, small = max(abs(p), abs(q)), min(abs(p), abs(q))
        if small < 2 or big == small or gcd(big, small) != 1:
            raise InputError(f"torus knot ({p},{q}) needs coprime |p|, |q| both > 1")
        object.__setattr__(self, "p", sign * big)
        object.__setattr__(self, "q", small)


@dataclass(frozen=True)
class Cable:
    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 or self.q <= 1 or gcd(abs(self.p), self.q) != 1:
            raise InputError(f"cable ({self.p},{self.q}) needs p != 0, q > 1, gcd(|p|, q) = 1")


@dataclass(frozen=True)
class Hyperbolic:
    """Hyperbolic piece; child slots are boundary components ``1 .. boundary_count - 1``.

    ``meridian`` indexes the parent-meridian choice, ``longitudes[i]`` the
    longitude choice on slot ``i + 1``, and ``filled`` lists slots closed off
    by de-satellitation.
    """

    catalog_id: str
    meridian: int = 0
    longitudes: tuple[int, ...] = ()
    filled: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "longitudes", tuple(self.longitudes))
        object.__setattr__(self, "filled", tuple(sorted(self.filled)))


NodeKind = Union[KeyChain, TorusKnot, Cable, Hyperbolic]


@dataclass(frozen=True)
class CatalogEntry:
    catalog_id: str
    boundary_count: int
    volume: str
    meridian_choices: int = 1
    longitude_choices_per_boundary: int = 1

    def __post_init__(self):
        if self.boundary_count < 1:
            raise InputError(f"{self.catalog_id}: boundary_count must be >= 1")
        if not 1 <= self.meridian_choices <= 3:
            raise InputError(f"{self.catalog_id}: meridian_choices must be 1, 2 or 3")
        if self.longitude_choices_per_boundary < 1:
            raise InputError(f"{self.catalog_id}: longitude_choices_per_boundary must be >= 1")
        try:
            v = Decimal(str(self.volume))
        except ArithmeticError:
            raise InputError(f"{self.catalog_id}: volume {self.volume!r} is not a decimal") from None
        if not v.is_finite() or v <= 0:
            raise InputError(f"{self.catalog_id}: volume must be positive")
        object.__setattr__(self, "volume", str(self.volume))


@dataclass(frozen=True)
class HyperbolicCatalog:
    entries: tuple[CatalogEntry, ...] = ()

    def get(self, catalog_id: str) -> CatalogEntry | None:
        return next((e for e in self.entries if e.catalog_id == catalog_id), None)

    @classmethod
    def from_json(cls, obj) -> HyperbolicCatalog:
        items = obj.get("entries", []) if isinstance(obj, dict) else obj
        try:
            return cls(tuple(CatalogEntry(str(e["catalog_id"]), int(e["boundary_count"]),
                                          str(e["volume"]), int(e.get("meridian_choices", 1)),
                                          int(e.get("longitude_choices_per_boundary", 1)))
                             for e in items))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad catalog JSON: {exc}") from None

    def to_json(self) -> dict:
        return {"entries": [e.__dict__.copy() for e in self.entries]}


EMPTY_CATALOG = HyperbolicCatalog()


def arity(kind: NodeKind, cat: HyperbolicCatalog | None = None) -> int | None:
    """Number of children the kind requires; ``None`` for an unresolved hyperbolic id."""
    if isinstance(kind, KeyChain):
        return kind.r
    if isinstance(kind, TorusKnot):
        return 0
    if isinstance(kind, Cable):
        return 1
    entry = cat.get(kind.catalog_id) if cat else None
    if entry is None:
        return None
    return entry.boundary_count - 1 - len(kind.filled)


# -------------------------------------------------------------------- trees

@dataclass(frozen=True)
class Edge:
    parent: str
    child: str
    slot: int = 0


@dataclass(frozen=True)
class DecoratedTree:
    root: str | None
    nodes: Mapping[str, NodeKind] = field(default_factory=dict)
    edges: tuple[Edge, ...] = ()

    @property
    def is_empty(self) -> bool:
        return self.root is None

    def children(self, node: str) -> list[Edge]:
        return sorted((e for e in self.edges if e.parent == node), key=lambda e: (e.slot, e.child))

    def parent_edge(self, node: str) -> Edge | None:
        return next((e for e in self.edges if e.child == node), None)

    def subtree(self, node: str) -> list[str]:
        out, stack = [], [node]
        while stack:
            v = stack.pop()
            out.append(v)
            stack.extend(e.child for e in self.edges if e.parent == v)
        return out

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "nodes": [_node_json(i, k) for i, k in self.nodes.items()],
            "edges": [{"parent": e.parent, "child": e.child, "slot": e.slot} for e in self.edges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> DecoratedTree:
        try:
            nodes = {}
            for n in obj.get("nodes", []):
                nid = str(n["id"])
                if nid in nodes:
                    raise InputError(f"duplicate node id {nid!r}")
                nodes[nid] = _kind_from_json(n["kind"], n.get("params", {}))
            edges = tuple(Edge(str(e["parent"]), str(e["child"]), int(e.get("slot", 0)))
                          for e in obj.get("edges", []))
            root = obj.get("root")
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad tree JSON: {exc}") from None
        return cls(None if root is None else str(root), nodes, edges)


EMPTY_TREE = DecoratedTree(None)


def _node_json(nid: str, kind: NodeKind) -> dict:
    if isinstance(kind, KeyChain):
        return {"id": nid, "kind": "key-chain", "params": {"r": kind.r}}
    if isinstance(kind, TorusKnot):
        return {"id": nid, "kind": "torus-knot", "params": {"p": kind.p, "q": kind.q}}
    if isinstance(kind, Cable):
        return {"id": nid, "kind": "cable", "params": {"p": kind.p, "q": kind.q}}
    return {"id": nid, "kind": "hyperbolic", "params": {
        "catalog_id": kind.catalog_id, "meridian": kind.meridian,
        "longitudes": list(kind.longitudes), "filled": list(kind.filled)}}


def _kind_from_json(kind: str, params: dict) -> NodeKind:
    if kind == "key-chain":
        return KeyChain(int(params["r"]))
    if kind == "torus-knot":
        return TorusKnot(int(params["p"]), int(params["q"]))
    if kind == "cable":
        return Cable(int(params["p"]), int(params["q"]))
    if kind == "hyperbolic":
        return Hyperbolic(str(params["catalog_id"]), int(params.get("meridian", 0)),
                          tuple(int(x) for x in params.get("longitudes", ())),
                          tuple(int(x) for x in params.get("filled", ())))
    raise InputError(f"unknown node kind {kind!r}")


class Diagnostic(NamedTuple):
    node: str | None
    message: str


def _diagnostics(t: DecoratedTree, cat: HyperbolicCatalog | None) -> list[Diagnostic]:
    """``cat=None`` skips every check that needs the catalog."""
    if t.is_empty:
        return [Diagnostic(None, "empty tree has nodes or edges")] if t.nodes or t.edges else []
    diags: list[Diagnostic] = []
    if t.root not in t.nodes:
        return [Diagnostic(t.root, "root is not a node")]
    parents: dict[str, list[str]] = {}
    for e in t.edges:
        for end in (e.parent, e.child):
            if end not in t.nodes:
                diags.append(Diagnostic(end, "edge references an unknown node"))
        parents.setdefault(e.child, []).append(e.parent)
    if diags:
        return diags
    if t.root in parents:
        diags.append(Diagnostic(t.root, "root has a parent"))
    for nid in t.nodes:
        if len(parents.get(nid, ())) > 1:
            diags.append(Diagnostic(nid, "node has more than one parent"))
    reach, stack = set(), [t.root]
    while stack:
        v = stack.pop()
        if v in reach:
            continue
        reach.add(v)
        stack.extend(e.child for e in t.edges if e.parent == v)
    for nid in t.nodes:
        if nid not in reach:
            diags.append(Diagnostic(nid, "node not connected to the root"))
    if diags:
        return diags

    for nid, kind in t.nodes.items():
        kids = t.children(nid)
        if isinstance(kind, KeyChain):
            for e in kids:
                if isinstance(t.nodes[e.child], KeyChain):
                    diags.append(Diagnostic(e.child, "key-chain vertex has a key-chain child"))
        if isinstance(kind, Hyperbolic):
            if cat is None:
                continue
            entry = cat.get(kind.catalog_id)
            if entry is None:
                diags.append(Diagnostic(nid, f"unknown catalog id {kind.catalog_id!r}"))
                continue
            slots = range(1, entry.boundary_count)
            if not 0 <= kind.meridian < entry.meridian_choices:
                diags.append(Diagnostic(nid, f"meridian choice must be < {entry.meridian_choices}"))
            if len(kind.longitudes) != entry.boundary_count - 1:
                diags.append(Diagnostic(nid, f"expected {entry.boundary_count - 1} longitude choices"))
            elif any(not 0 <= x < entry.longitude_choices_per_boundary for x in kind.longitudes):
                diags.append(Diagnostic(nid, f"longitude choices must be < {entry.longitude_choices_per_boundary}"))
            if len(set(kind.filled)) != len(kind.filled) or any(s not in slots for s in kind.filled):
                diags.append(Diagnostic(nid, "filled slots must be distinct boundary slots"))
            used = [e.slot for e in kids]
            if len(set(used)) != len(used) or any(s not in slots or s in kind.filled for s in used):
                diags.append(Diagnostic(nid, "children must occupy distinct open boundary slots"))
        need = arity(kind, cat)
        if need is not None and len(kids) != need:
            if isinstance(kind, Cable):
                msg = f"cable requires exactly one child, has {len(kids)}"
            else:
                msg = f"{_kind_name(kind)} requires {need} children, has {len(kids)}"
            diags.append(Diagnostic(nid, msg))
    return diags


def _kind_name(kind: NodeKind) -> str:
    return {KeyChain: "key-chain", TorusKnot: "torus-knot", Cable: "cable",
            Hyperbolic: "hyperbolic"}[type(kind)]


def validate_tree(t: DecoratedTree, cat: HyperbolicCatalog = EMPTY_CATALOG) -> list[Diagnostic]:
    """Every violated tree invariant, as ``(node, message)`` pairs; empty when valid."""
    return _diagnostics(t, cat)


def _require(t: DecoratedTree, cat: HyperbolicCatalog | None) -> None:
    diags = _diagnostics(t, cat)
    if diags:
        raise InputError("invalid tree: " + "; ".join(f"{d.node}: {d.message}" for d in diags))


# ---------------------------------------------------------- canonical codes

# A shape is (kind, ((slot, shape), ...)): a tree without node ids.
Shape = tuple


def _encode_kind(kind: NodeKind) -> str:
    if isinstance(kind, KeyChain):
        return f"K({kind.r})"
    if isinstance(kind, TorusKnot):
        return f"T({kind.p},{kind.q})"
    if isinstance(kind, Cable):
        return f"C({kind.p},{kind.q})"
    lon = ",".join(map(str, kind.longitudes))
    fill = ",".join(map(str, kind.filled))
    return f"H({kind.catalog_id};m{kind.meridian};l{lon};f{fill})"


def encode_shape(shape: Shape) -> str:
    kind, kids = shape
    head = _encode_kind(kind)
    if isinstance(kind, TorusKnot):
        return head
    if isinstance(kind, KeyChain):
        body = ",".join(sorted(encode_shape(s) for _, s in kids))
    elif isinstance(kind, Cable):
        body = ",".join(encode_shape(s) for _, s in kids)
    else:
        body = ",".join(f"{slot}:{encode_shape(s)}" for slot, s in sorted(kids, key=lambda x: x[0]))
    return f"{head}[{body}]"


def to_shape(t: DecoratedTree, node: str | None = None) -> Shape:
    node = t.root if node is None else node
    return (t.nodes[node], tuple((e.slot, to_shape(t, e.child)) for e in t.children(node)))


def from_shape(shape: Shape) -> DecoratedTree:
    """Build a tree with ids ``n0, n1, ...`` in canonical preorder."""
    nodes: dict[str, NodeKind] = {}
    edges: list[Edge] = []

    def visit(s: Shape, parent: str | None, slot: int):
        nid = f"n{len(nodes)}"
        kind, kids = s
        nodes[nid] = kind
        if parent is not None:
            edges.append(Edge(parent, nid, slot))
        if isinstance(kind, KeyChain):
            kids = sorted(kids, key=lambda x: encode_shape(x[1]))
            kids = [(i, k) for i, (_, k) in enumerate(kids)]
        for sl, k in kids:
            visit(k, nid, sl)

    visit(shape, None, 0)
    return DecoratedTree("n0", nodes, tuple(edges))


def canonical_form(t: DecoratedTree) -> str:
    """Deterministic code; equal codes exactly for isomorphic decorated trees.

    Key-chain children are an unordered multiset, hyperbolic children are
    ordered by boundary slot, and node ids are ignored.
    """
    _require(t, None)
    if t.is_empty:
        return "U"
    return encode_shape(to_shape(t))


# -------------------------------------------------------------- enumeration

@dataclass(frozen=True)
class EnumerationBounds:
    max_vertices: int
    max_abs_p: int
    max_q: int
    max_r: int = 2

    def __post_init__(self):
        if min(self.max_vertices, self.max_abs_p, self.max_q, self.max_r) < 0:
            raise InputError("enumeration bounds must be nonnegative")

    @classmethod
    def for_rank(cls, n: int, max_abs_p: int, max_q: int, max_r: int = 2) -> EnumerationBounds:
        """Vertex cap ``4n - 3`` for groups of rank ``n``."""
        return cls(max(0, 4 * n - 3), max_abs_p, max_q, max_r)


def torus_knot_kinds(max_abs_p: int, max_q: int) -> list[TorusKnot]:
    return [TorusKnot(s * p, q)
            for q in range(2, max_q + 1) for p in range(q + 1, max_abs_p + 1)
            if gcd(p, q) == 1 for s in (1, -1)]


def cable_kinds(max_abs_p: int, max_q: int) -> list[Cable]:
    return [Cable(s * p, q)
            for q in range(2, max_q + 1) for p in range(1, max_abs_p + 1)
            if gcd(p, q) == 1 for s in (1, -1)]


def _hyperbolic_kinds(entry: CatalogEntry) -> Iterable[Hyperbolic]:
    for m in range(entry.meridian_choices):
        for lon in itertools.product(range(entry.longitude_choices_per_boundary),
                                     repeat=entry.boundary_count - 1):
            yield Hyperbolic(entry.catalog_id, m, lon)


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` positive ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_trees(bounds: EnumerationBounds,
                    cat: HyperbolicCatalog = EMPTY_CATALOG) -> list[DecoratedTree]:
    """All valid decorated trees within ``bounds``, once each, sorted by canonical code."""
    V = bounds.max_vertices
    if V <= 0:
        return []
    torus = torus_knot_kinds(bounds.max_abs_p, bounds.max_q)
    cables = cable_kinds(bounds.max_abs_p, bounds.max_q)
    hyper = [(e, k) for e in cat.entries for k in _hyperbolic_kinds(e)]

    @lru_cache(maxsize=None)
    def gen(n: int, keychain_root: bool) -> tuple[tuple[str, Shape], ...]:
        out: list[Shape] = []
        if n == 1:
            out += [(k, ()) for k in torus]
            out += [(k, ()) for e, k in hyper if e.boundary_count == 1]
        else:
            for c in cables:
                out += [(c, ((0, s),)) for _, s in gen(n - 1, True)]
            if keychain_root:
                for r in range(2, bounds.max_r + 1):
                    out += [(KeyChain(r), tuple(enumerate(ms))) for ms in multisets(r, n - 1)]
            for e, k in hyper:
                b = e.boundary_count
                if b < 2:
                    continue
                for sizes in _compositions(n - 1, b - 1):
                    for combo in itertools.product(*(gen(sz, True) for sz in sizes)):
                        out.append((k, tuple((slot, s) for slot, (_, s) in enumerate(combo, 1))))
        return tuple(sorted((encode_shape(s), s) for s in out))

    def multisets(r: int, total: int):
        """Multisets of r non-key-chain-rooted shapes with sizes summing to ``total``."""
        pool = [(sz, code, s) for sz in range(1, total - r + 2) for code, s in gen(sz, False)]

        def rec(start: int, left: int, remaining: int):
            if left == 0:
                if remaining == 0:
                    yield ()
                return
            for i in range(start, len(pool)):
                sz = pool[i][0]
                if sz + (left - 1) > remaining:
                    continue
                for rest in rec(i, left - 1, remaining - sz):
                    yield (pool[i][2],) + rest

        yield from rec(0, r, total)

    coded = [item for n in range(1, V + 1) for item in gen(n, True)]
    coded.sort(key=lambda x: x[0])
    certify(len({c for c, _ in coded}) == len(coded), "enumeration produced a duplicate tree")
    return [from_shape(s) for _, s in coded]


# ----------------------------------------------------- satellite operations

def _without(t: DecoratedTree, drop: Iterable[str]) -> tuple[dict, list[Edge]]:
    drop = set(drop)
    nodes = {k: v for k, v in t.nodes.items() if k not in drop}
    edges = [e for e in t.edges if e.parent not in drop and e.child not in drop]
    return nodes, edges


def desatellite(t: DecoratedTree, child_edge: str,
                cat: HyperbolicCatalog | None = None) -> DecoratedTree:
    """Cut the edge above node ``child_edge``, drop that subtree and rewrite the parent.

    Cable(p, q) becomes TorusKnot(p, q); with ``|p| = 1`` it becomes an
    unknot complement, which in turn is removed from its own parent (the
    empty tree if it was the root).  KeyChain(r) becomes KeyChain(r - 1),
    and a 1-key-chain is spliced out.  A hyperbolic parent keeps its kind
    and records the slot as filled.
    """
    _require(t, cat)
    if t.parent_edge(child_edge) is None:
        raise InputError(f"no edge above node {child_edge!r}")
    out = _cut(t, child_edge)
    certify(not _diagnostics(out, cat), "de-satellitation produced an invalid tree")
    certify(len(out.nodes) < len(t.nodes), "de-satellitation did not shrink the tree")
    return out


def _cut(t: DecoratedTree, child: str) -> DecoratedTree:
    edge = t.parent_edge(child)
    parent = edge.parent
    nodes, edges = _without(t, t.subtree(child))
    kind = nodes[parent]
    if isinstance(kind, Cable):
        if abs(kind.p) == 1:
            # the parent is now a solid torus: fill it into its own parent
            if t.parent_edge(parent) is None:
                return EMPTY_TREE
            return _cut(DecoratedTree(t.root, nodes, tuple(edges)), parent)
        nodes[parent] = TorusKnot(kind.p, kind.q)
    elif isinstance(kind, KeyChain):
        if kind.r > 2:
            nodes[parent] = KeyChain(kind.r - 1)
        else:
            survivor = next(e.child for e in edges if e.parent == parent)
            up = t.parent_edge(parent)
            del nodes[parent]
            edges = [e for e in edges if parent not in (e.parent, e.child)]
            if up is None:
                return DecoratedTree(survivor, nodes, tuple(edges))
            edges.append(Edge(up.parent, survivor, up.slot))
    elif isinstance(kind, Hyperbolic):
        nodes[parent] = replace(kind, filled=kind.filled + (edge.slot,))
    else:
        raise InputError(f"node {parent!r} cannot have children")
    return DecoratedTree(t.root, nodes, tuple(edges))


def graft(t: DecoratedTree, slot: tuple[str, int | None], s: DecoratedTree,
          cat: HyperbolicCatalog | None = None) -> DecoratedTree:
    """Attach ``s`` at the open child slot ``(node, slot_index)`` of a partial tree ``t``.

    ``slot_index`` may be ``None`` for key-chain and cable nodes.
    """
    node, index = slot
    if node not in t.nodes:
        raise InputError(f"unknown node {node!r}")
    if s.is_empty:
        raise InputError("cannot graft the empty tree")
    _require(s, cat)
    kind = t.nodes[node]
    kids = t.children(node)
    if isinstance(kind, Hyperbolic):
        if cat is None or cat.get(kind.catalog_id) is None:
            raise InputError(f"catalog entry {kind.catalog_id!r} needed to graft into a hyperbolic node")
        open_slots = [i for i in range(1, cat.get(kind.catalog_id).boundary_count)
                      if i not in kind.filled and i not in {e.slot for e in kids}]
        if index is None:
            index = open_slots[0] if open_slots else None
        if index not in open_slots:
            raise InputError(f"slot {index} of node {node!r} is not open")
    else:
        need = arity(kind)
        if len(kids) >= need:
            raise InputError(f"node {node!r} ({_kind_name(kind)}) has no open slot")
        if index is None:
            used = {e.slot for e in kids}
            index = next(i for i in itertools.count() if i not in used)
    if isinstance(kind, KeyChain) and isinstance(s.nodes[s.root], KeyChain):
        raise InputError("a key-chain vertex cannot have a key-chain child")

    rename = {}
    taken = set(t.nodes)
    for nid in s.nodes:
        new = nid
        k = 0
        while new in taken:
            k += 1
            new = f"{nid}_{k}"
        taken.add(new)
        rename[nid] = new
    nodes = dict(t.nodes)
    nodes.update({rename[k]: v for k, v in s.nodes.items()})
    edges = list(t.edges) + [Edge(rename[e.parent], rename[e.child], e.slot) for e in s.edges]
    edges.append(Edge(node, rename[s.root], index))
    return DecoratedTree(t.root, nodes, tuple(edges))


# ---------------------------------------------------------------- accounting

class WindingStep(NamedTuple):
    parent: str
    child: str
    factor: int
    hyperbolic: bool


def winding_path(t: DecoratedTree, v: str) -> list[WindingStep]:
    """Edge factors from ``v`` up to the root (``q`` across a cable, else 1)."""
    if v not in t.nodes:
        raise InputError(f"unknown node {v!r}")
    steps = []
    node = v
    while (e := t.parent_edge(node)) is not None:
        kind = t.nodes[e.parent]
        steps.append(WindingStep(e.parent, node, kind.q if isinstance(kind, Cable) else 1,
                                 isinstance(kind, Hyperbolic)))
        node = e.parent
    return steps


def winding_divisibility(t: DecoratedTree, v: str) -> int:
    """``d`` such that H1 of the complement below ``v`` maps into ``d Z``."""
    d = 1
    for step in winding_path(t, v):
        d *= step.factor
    return d


@dataclass(frozen=True)
class PieceStats:
    pieces: int
    rank: int
    rank_derived: bool
    piece_cap: int
    weidmann_ok: bool
    volume_sum: str
    volume_bound_pi: int
    volume_ok: bool | None
    cable_q_cap: int
    cable_q_ok: bool


def min_rank_for_pieces(pieces: int) -> int:
    """Smallest ``n >= 1`` with ``pieces <= 4n - 3``."""
    return max(1, -(-(pieces + 3) // 4))


def piece_stats(t: DecoratedTree, cat: HyperbolicCatalog, plen: int,
                rank: int | None = None, dps: int = DEFAULT_DPS) -> PieceStats:
    """Piece count against ``4n - 3``, hyperbolic volume against ``pi * plen``,
    and cable indices against ``2 * 3**plen``.

    ``volume_ok`` is ``None`` when the comparison could not be certified.
    """
    if plen < 0:
        raise InputError("plen must be nonnegative")
    volumes = []
    for nid, kind in t.nodes.items():
        if isinstance(kind, Hyperbolic):
            entry = cat.get(kind.catalog_id)
            if entry is None:
                raise InputError(f"node {nid}: unknown catalog id {kind.catalog_id!r}")
            volumes.append(Decimal(entry.volume))
    digits = sum(len(v.as_tuple().digits) + abs(v.as_tuple().exponent) for v in volumes) + 10
    with localcontext() as ctx:
        ctx.prec = digits  # wide enough that the sum is exact
        total = sum(volumes, Decimal(0))
    derived = rank is None
    n = min_rank_for_pieces(len(t.nodes)) if derived else rank
    if n < 1:
        raise InputError("rank must be at least 1")
    cap = torsion_cap(plen)
    return PieceStats(
        pieces=len(t.nodes),
        rank=n,
        rank_derived=derived,
        piece_cap=4 * n - 3,
        weidmann_ok=len(t.nodes) <= 4 * n - 3,
        volume_sum=str(total),
        volume_bound_pi=plen,
        volume_ok=volume_within_bound(total, plen, dps),
        cable_q_cap=cap,
        cable_q_ok=all(k.q <= cap for k in t.nodes.values() if isinstance(k, Cable)),
    )
