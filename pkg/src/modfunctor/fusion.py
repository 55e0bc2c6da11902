"""Standard surfaces, their pair-of-pants decompositions and fusion-space bases.

A standard POP decomposition of the disc with ``n`` ordered holes is encoded as
a full binary tree on the leaves ``0..n-1``.  Every node is addressed by the
half-open interval ``(start, stop)`` of holes it encloses, so a node doubles as
the observable (simple closed curve) around those holes.

The root edge of a fusion tree carries the *total* charge of the interior
holes, which is ``dual(exterior)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

import numpy as np

from .model import AnyonModel, Label, ModelError

Span = tuple[int, int]
Structure = Union[None, int, tuple]


class ShapeError(ValueError):
    """A tree shape or node reference is malformed."""


class GluingError(ValueError):
    """Labels do not match across a gluing seam."""


# ---------------------------------------------------------------------------
# tree shapes


def _span(node) -> Span:
    if isinstance(node, int):
        return node, node + 1
    lo, _ = _span(node[0])
    _, hi = _span(node[1])
    return lo, hi


def _renumber(node, start: int = 0):
    """Relabel leaves left to right from ``start``; returns (node, next index)."""
    if isinstance(node, int):
        return start, start + 1
    left, mid = _renumber(node[0], start)
    right, stop = _renumber(node[1], mid)
    return (left, right), stop


@dataclass(frozen=True)
class TreeShape:
    """Full binary tree with ordered leaves ``0..n-1`` (``structure`` nests pairs)."""

    structure: Structure
    n: int = field(init=False)

    def __post_init__(self):
        s = self.structure
        if s is None:
            object.__setattr__(self, "n", 0)
            return
        leaves = list(self._leaves(s))
        if leaves != list(range(len(leaves))):
            raise ShapeError(f"leaves must be 0..n-1 in order, got {leaves}")
        object.__setattr__(self, "n", len(leaves))

    @staticmethod
    def _leaves(node) -> Iterator[int]:
        if isinstance(node, int):
            yield node
            return
        if not (isinstance(node, tuple) and len(node) == 2):
            raise ShapeError(f"tree nodes must be pairs, got {node!r}")
        yield from TreeShape._leaves(node[0])
        yield from TreeShape._leaves(node[1])

    # -- constructors

    @classmethod
    def left_comb(cls, n: int) -> "TreeShape":
        if n == 0:
            return cls(None)
        node: Structure = 0
        for i in range(1, n):
            node = (node, i)
        return cls(node)

    @classmethod
    def right_comb(cls, n: int) -> "TreeShape":
        if n == 0:
            return cls(None)
        node: Structure = n - 1
        for i in range(n - 2, -1, -1):
            node = (i, node)
        return cls(node)

    @classmethod
    def all_shapes(cls, n: int) -> list["TreeShape"]:
        """Every full binary tree on ``n`` ordered leaves (Catalan many)."""

        def build(lo, hi):
            if hi - lo == 1:
                return [lo]
            out = []
            for mid in range(lo + 1, hi):
                for left in build(lo, mid):
                    for right in build(mid, hi):
                        out.append((left, right))
            return out

        if n == 0:
            return [cls(None)]
        return [cls(s) for s in build(0, n)]

    @classmethod
    def parse(cls, text: str) -> "TreeShape":
        """Parse bracket notation with 1-based leaves, e.g. ``"((1 2) (3 4))"``."""
        tokens = re.findall(r"\(|\)|\d+|\S", text)
        if not tokens:
            return cls(None)
        pos = 0

        def node():
            nonlocal pos
            if pos >= len(tokens):
                raise ShapeError(f"unexpected end of shape {text!r}")
            tok = tokens[pos]
            pos += 1
            if tok.isdigit():
                return int(tok) - 1
            if tok != "(":
                raise ShapeError(f"unexpected token {tok!r} in shape {text!r}")
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(node())
            if pos >= len(tokens):
                raise ShapeError(f"unbalanced brackets in {text!r}")
            pos += 1
            if len(items) == 1:
                return items[0]
            if len(items) != 2:
                raise ShapeError(f"each bracket must hold exactly two subtrees in {text!r}")
            return tuple(items)

        result = node()
        if pos != len(tokens):
            raise ShapeError(f"trailing input in shape {text!r}")
        return cls(result)

    def __str__(self) -> str:
        def fmt(node):
            if isinstance(node, int):
                return str(node + 1)
            return f"({fmt(node[0])} {fmt(node[1])})"

        return "" if self.structure is None else fmt(self.structure)

    # -- navigation

    @cached_property
    def _children(self) -> dict[Span, tuple[Span, Span] | None]:
        out: dict = {}

        def walk(node):
            if isinstance(node, int):
                out[node, node + 1] = None
                return
            walk(node[0])
            walk(node[1])
            out[_span(node)] = (_span(node[0]), _span(node[1]))

        if self.structure is not None:
            walk(self.structure)
        return out

    @property
    def root(self) -> Span | None:
        return None if self.n == 0 else (0, self.n)

    def nodes(self) -> list[Span]:
        """All node spans, leaves included, in post-order."""
        return list(self._children)

    def internal_nodes(self) -> list[Span]:
        return [s for s, ch in self._children.items() if ch is not None]

    def edges(self) -> list[Span]:
        """Internal non-root nodes in post-order: the edges that carry free labels."""
        return [s for s in self.internal_nodes() if s != self.root]

    def __contains__(self, span) -> bool:
        return tuple(span) in self._children

    def children(self, span: Span) -> tuple[Span, Span]:
        span = tuple(span)
        if span not in self._children:
            raise ShapeError(f"no node enclosing holes {span} in shape {self}")
        ch = self._children[span]
        if ch is None:
            raise ShapeError(f"node {span} is a leaf")
        return ch

    def is_leaf(self, span: Span) -> bool:
        return self._children.get(tuple(span), ()) is None

    # -- local rewrites

    def _rewrite(self, span: Span, fn) -> "TreeShape":
        span = tuple(span)

        def walk(node):
            if _span(node) == span:
                return fn(node)
            if isinstance(node, int):
                return node
            return walk(node[0]), walk(node[1])

        self.children(span)
        new, _ = _renumber(walk(self.structure))
        return TreeShape(new)

    def rotate_right(self, span: Span) -> "TreeShape":
        """((A B) C) -> (A (B C)) at ``span``."""

        def fn(node):
            left, c = node
            if isinstance(left, int):
                raise ShapeError(f"left child of node {span} is a leaf; F does not apply")
            return left[0], (left[1], c)

        return self._rewrite(span, fn)

    def rotate_left(self, span: Span) -> "TreeShape":
        """(A (B C)) -> ((A B) C) at ``span``."""

        def fn(node):
            a, right = node
            if isinstance(right, int):
                raise ShapeError(f"right child of node {span} is a leaf; F^-1 does not apply")
            return (a, right[0]), right[1]

        return self._rewrite(span, fn)

    def swap_children(self, span: Span) -> "TreeShape":
        """(A B) -> (B A) at ``span``; leaves are renumbered left to right."""
        return self._rewrite(span, lambda node: (node[1], node[0]))


# ---------------------------------------------------------------------------
# surfaces, trees, bases


@dataclass(frozen=True)
class StandardSurface:
    """Disc with ordered interior holes ``interior`` and exterior label ``exterior``."""

    interior: tuple[Label, ...]
    exterior: Label

    def __post_init__(self):
        object.__setattr__(self, "interior", tuple(self.interior))

    @property
    def n(self) -> int:
        return len(self.interior)

    def total_charge(self, model: AnyonModel) -> Label:
        return model.dual[self.exterior]

    def check(self, model: AnyonModel) -> None:
        for lab in (*self.interior, self.exterior):
            if not 0 <= lab < model.size:
                raise ModelError(f"label index {lab} not in model {model.name}")

    def swap(self, i: int) -> "StandardSurface":
        """Exchange interior holes at 0-based positions ``i`` and ``i + 1``."""
        a = list(self.interior)
        a[i], a[i + 1] = a[i + 1], a[i]
        return StandardSurface(tuple(a), self.exterior)

    def rotate(self) -> "StandardSurface":
        """(a1..an; b) -> (a2..an b; a1): the relabelling done by a Z-move."""
        if self.n == 0:
            return self
        return StandardSurface(self.interior[1:] + (self.exterior,), self.interior[0])

    def unrotate(self) -> "StandardSurface":
        if self.n == 0:
            return self
        return StandardSurface((self.exterior,) + self.interior[:-1], self.interior[-1])

    def to_dict(self, model: AnyonModel) -> dict:
        return {
            "interior": [model.labels[a] for a in self.interior],
            "exterior": model.labels[self.exterior],
        }

    @classmethod
    def from_dict(cls, model: AnyonModel, doc: dict) -> "StandardSurface":
        return cls(tuple(model.index(a) for a in doc["interior"]), model.index(doc["exterior"]))

    @classmethod
    def from_names(cls, model: AnyonModel, interior, exterior) -> "StandardSurface":
        return cls(tuple(model.index(a) for a in interior), model.index(exterior))


@dataclass(frozen=True)
class FusionTree:
    """A standard-basis vector: an admissible labelling of a tree shape."""

    shape: TreeShape
    leaf_labels: tuple[Label, ...]
    root_label: Label
    edge_labels: tuple[Label, ...]
    total_charge: Label

    @cached_property
    def charges(self) -> dict[Span, Label]:
        out = {(i, i + 1): a for i, a in enumerate(self.leaf_labels)}
        out.update(zip(self.shape.edges(), self.edge_labels))
        if self.shape.root is not None:
            out[self.shape.root] = self.total_charge
        return out

    def charge(self, span: Span) -> Label:
        return self.charges[tuple(span)]

    def describe(self, model: AnyonModel) -> str:
        """Bracket form with charges, e.g. ``((tau tau)->1 tau)->tau``."""
        names = model.labels

        def fmt(node):
            if isinstance(node, int):
                return names[self.leaf_labels[node]]
            return f"({fmt(node[0])} {fmt(node[1])})->{names[self.charge(_span(node))]}"

        if self.shape.structure is None:
            return f"()->{names[self.total_charge]}"
        return fmt(self.shape.structure)


@dataclass(frozen=True)
class Observable:
    """The closed curve around the holes of one node of a decomposition."""

    shape: TreeShape
    span: Span

    def __post_init__(self):
        object.__setattr__(self, "span", tuple(self.span))
        if self.span not in self.shape:
            raise ShapeError(f"observable {self.span} is not a node of {self.shape}")


@dataclass(frozen=True)
class Basis:
    """Row/column metadata: which surface and which decomposition."""

    surface: StandardSurface
    shape: TreeShape


def _default_shape(surface: StandardSurface, shape: TreeShape | None) -> TreeShape:
    if shape is None:
        return TreeShape.left_comb(surface.n)
    if shape.n != surface.n:
        raise ShapeError(f"shape has {shape.n} leaves but surface has {surface.n} holes")
    return shape


def enumerate_basis(
    model: AnyonModel, surface: StandardSurface, shape: TreeShape | None = None
) -> list[FusionTree]:
    """All admissible labellings of ``shape``, sorted by post-order edge labels."""
    shape = _default_shape(surface, shape)
    total = surface.total_charge(model)
    b = surface.exterior
    if surface.n == 0:
        return [FusionTree(shape, (), b, (), total)] if total == model.vacuum else []

    def sub(node):
        if isinstance(node, int):
            return [(surface.interior[node], ())]
        out = []
        for cl, tl in sub(node[0]):
            for cr, tr in sub(node[1]):
                for c in model.fuse(cl, cr):
                    out.append((c, tl + tr + (c,)))
        return out

    trees = []
    for charge, labels in sub(shape.structure):
        if charge == total:
            edge = labels[:-1] if surface.n > 1 else labels
            trees.append(FusionTree(shape, surface.interior, b, edge, total))
    trees.sort(key=lambda t: t.edge_labels)
    return trees


def basis_index(trees: list[FusionTree]) -> dict[tuple, int]:
    return {t.edge_labels: i for i, t in enumerate(trees)}


def dim(model: AnyonModel, surface: StandardSurface, shape: TreeShape | None = None) -> int:
    """Dimension of the fusion space, by counting charges bottom-up."""
    shape = _default_shape(surface, shape)
    total = surface.total_charge(model)
    if surface.n == 0:
        return int(total == model.vacuum)

    def counts(node) -> dict[Label, int]:
        if isinstance(node, int):
            return {surface.interior[node]: 1}
        left, right = counts(node[0]), counts(node[1])
        out: dict[Label, int] = {}
        for a, na in left.items():
            for b, nb in right.items():
                for c in model.fuse(a, b):
                    out[c] = out.get(c, 0) + na * nb
        return out

    return counts(shape.structure).get(total, 0)


def glue(
    model: AnyonModel, outer: StandardSurface, hole_index: int, inner: StandardSurface
) -> StandardSurface:
    """Glue the exterior of ``inner`` into interior hole ``hole_index`` (0-based) of ``outer``."""
    if not 0 <= hole_index < outer.n:
        raise GluingError(f"outer surface has no hole {hole_index}")
    seam = outer.interior[hole_index]
    if inner.exterior != model.dual[seam]:
        raise GluingError(
            f"seam mismatch: inner exterior {model.labels[inner.exterior]} is not the dual"
            f" of hole label {model.labels[seam]}"
        )
    interior = outer.interior[:hole_index] + inner.interior + outer.interior[hole_index + 1:]
    return StandardSurface(interior, outer.exterior)


def charge_projector(
    model: AnyonModel,
    surface: StandardSurface,
    shape: TreeShape | None,
    obs: Observable,
    a: Label,
) -> np.ndarray:
    """Diagonal 0/1 projector onto the sector where ``obs`` measures charge ``a``."""
    shape = _default_shape(surface, shape)
    if obs.shape != shape:
        raise ShapeError("observable belongs to a different decomposition")
    trees = enumerate_basis(model, surface, shape)
    return np.diag([1.0 if t.charge(obs.span) == a else 0.0 for t in trees])


def torus_dim(model: AnyonModel) -> int:
    """Glue the two ends of an annulus together and sum over the seam label."""
    return sum(dim(model, StandardSurface((a,), model.dual[a])) for a in range(model.size))
