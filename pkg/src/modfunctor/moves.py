"""Move calculus on fusion-space bases and braid-word compilation.

Every matrix produced here maps coordinates in a *source* basis (columns) to
coordinates in a *target* basis (rows), and carries both bases as metadata.
A sequence of moves executed left to right in time composes as
``M_k @ ... @ M_1``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .fusion import (
    Basis,
    FusionTree,
    ShapeError,
    Span,
    StandardSurface,
    TreeShape,
    basis_index,
    enumerate_basis,
)
from .model import AnyonModel, ModelError


class MoveError(ValueError):
    """A move cannot be placed where requested."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message if index is None else f"move {index}: {message}")
        self.index = index


class BasisMismatchError(ValueError):
    """Two unitaries were composed across incompatible bases."""


class WordError(ValueError):
    """A braid word is malformed or uses an out-of-range generator."""


# ---------------------------------------------------------------------------
# unitaries


@dataclass(frozen=True, eq=False)
class Unitary:
    matrix: np.ndarray
    rows: Basis
    cols: Basis

    def __matmul__(self, other: "Unitary") -> "Unitary":
        if not isinstance(other, Unitary):
            return NotImplemented
        if self.cols != other.rows:
            raise BasisMismatchError(
                f"cannot compose: left expects {_basis_str(self.cols)},"
                f" right produces {_basis_str(other.rows)}"
            )
        return Unitary(self.matrix @ other.matrix, self.rows, other.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    @property
    def H(self) -> "Unitary":
        """Conjugate transpose, with the bases swapped."""
        return Unitary(self.matrix.conj().T, self.cols, self.rows)

    def unitarity_residual(self) -> float:
        m = self.matrix
        if m.shape[0] != m.shape[1]:
            return float("inf")
        if m.size == 0:
            return 0.0
        return float(np.abs(m.conj().T @ m - np.eye(m.shape[0])).max())

    def to_dict(self, model: AnyonModel) -> dict:
        out = matrix_to_dict(self.matrix)
        out["row_basis"] = basis_to_dict(model, self.rows)
        out["col_basis"] = basis_to_dict(model, self.cols)
        return out


def _basis_str(b: Basis) -> str:
    return f"{b.surface.interior}->{b.surface.exterior} on {b.shape or '()'}"


def identity(model: AnyonModel, surface: StandardSurface, shape: TreeShape | None = None) -> Unitary:
    shape = shape or TreeShape.left_comb(surface.n)
    d = len(enumerate_basis(model, surface, shape))
    basis = Basis(surface, shape)
    return Unitary(np.eye(d, dtype=complex), basis, basis)


def _clean(x: float) -> float:
    return float(x) + 0.0  # folds -0.0 into 0.0


def matrix_to_dict(m: np.ndarray) -> dict:
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "entries": [[_clean(z.real), _clean(z.imag)] for z in np.asarray(m, complex).ravel()],
    }


def matrix_from_dict(doc: dict) -> np.ndarray:
    rows, cols = int(doc["rows"]), int(doc["cols"])
    entries = doc["entries"]
    if len(entries) != rows * cols:
        raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.array([complex(re_, im) for re_, im in entries], dtype=complex)
    return flat.reshape(rows, cols)


def basis_to_dict(model: AnyonModel, basis: Basis) -> dict:
    trees = enumerate_basis(model, basis.surface, basis.shape)
    return {
        "surface": basis.surface.to_dict(model),
        "shape": str(basis.shape),
        "trees": [t.describe(model) for t in trees],
    }


# ---------------------------------------------------------------------------
# moves


_KINDS = ("F", "R", "Z", "T")


@dataclass(frozen=True)
class Move:
    """One elementary move.

    ``span`` is the half-open hole interval of the node acted on.  For ``R`` a
    width-two span that is not a node of the current shape is allowed; the
    executor conjugates by F-moves to bring the pair under one node.
    ``Z`` takes no span.
    """

    kind: str
    span: Span | None = None
    inverse: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise MoveError(f"unknown move kind {self.kind!r}")
        if self.kind == "Z":
            if self.span is not None:
                raise MoveError("Z-moves take no placement")
        else:
            if self.span is None:
                raise MoveError(f"{self.kind}-move needs a placement")
            lo, hi = self.span
            object.__setattr__(self, "span", (int(lo), int(hi)))
            if not 0 <= lo < hi:
                raise MoveError(f"bad placement {self.span}")

    @property
    def inv(self) -> "Move":
        return Move(self.kind, self.span, not self.inverse)

    def __str__(self) -> str:
        name = self.kind + ("^-1" if self.inverse else "")
        if self.span is None:
            return name
        lo, hi = self.span
        return f"{name}({lo + 1})" if hi - lo == 1 else f"{name}({lo + 1},{hi})"

    @classmethod
    def parse(cls, text: str) -> "Move":
        """Inverse of ``str``: ``"R(2,3)"``, ``"F^-1(1,4)"``, ``"T(2)"``, ``"Z"``."""
        m = re.fullmatch(r"\s*([FRZT])(\^-1)?\s*(?:\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\))?\s*", text)
        if not m:
            raise MoveError(f"cannot parse move {text!r}")
        kind, inv, first, last = m.groups()
        span = None
        if first is not None:
            lo = int(first) - 1
            span = (lo, int(last) if last is not None else lo + 1)
        return cls(kind, span, bool(inv))


MoveSequence = tuple  # tuple[Move, ...]


def inverse_sequence(seq: Sequence[Move]) -> tuple[Move, ...]:
    return tuple(m.inv for m in reversed(seq))


# -- individual move matrices


def _charges_key(shape: TreeShape, charges: dict) -> tuple:
    return tuple(charges[e] for e in shape.edges())


def _assemble(model, source: Basis, target: Basis, rule) -> Unitary:
    """Build a matrix from ``rule(tree) -> [(target charges dict, coefficient)]``."""
    old = enumerate_basis(model, source.surface, source.shape)
    new = enumerate_basis(model, target.surface, target.shape)
    idx = basis_index(new)
    m = np.zeros((len(new), len(old)), dtype=complex)
    for j, tree in enumerate(old):
        for charges, coeff in rule(tree):
            key = _charges_key(target.shape, charges)
            if key not in idx:
                raise ModelError(f"move produced an inadmissible labelling {key}")
            m[idx[key], j] += coeff
    return Unitary(m, target, source)


def f_move(model: AnyonModel, surface: StandardSurface, shape: TreeShape,
           span: Span, inverse: bool = False) -> Unitary:
    """Re-associate at ``span``: ((A B) C) -> (A (B C)), or back when ``inverse``."""
    span = tuple(span)
    try:
        left, right = shape.children(span)
        new_shape = shape.rotate_left(span) if inverse else shape.rotate_right(span)
    except ShapeError as exc:
        raise MoveError(str(exc)) from None
    if not inverse:
        A, B = shape.children(left)
        C = right
        old_mid, new_mid = left, (B[0], C[1])
    else:
        A = left
        B, C = shape.children(right)
        old_mid, new_mid = right, (A[0], B[1])

    def rule(tree: FusionTree):
        ch = tree.charges
        a, b, c, d = ch[A], ch[B], ch[C], ch[span]
        out = []
        if not inverse:
            x = ch[old_mid]
            for y in model.fuse(b, c):
                if model.N(a, y, d):
                    new = dict(ch)
                    del new[old_mid]
                    new[new_mid] = y
                    out.append((new, model.F(a, b, c, d, x, y)))
        else:
            y = ch[old_mid]
            for x in model.fuse(a, b):
                if model.N(x, c, d):
                    new = dict(ch)
                    del new[old_mid]
                    new[new_mid] = x
                    out.append((new, model.F(a, b, c, d, x, y).conjugate()))
        return out

    return _assemble(model, Basis(surface, shape), Basis(surface, new_shape), rule)


def apply_f_move(model: AnyonModel, surface: StandardSurface, shape: TreeShape,
                 node: Span) -> tuple[TreeShape, Unitary]:
    """F at ``node`` in whichever direction its children allow (left-heavy first)."""
    left, right = shape.children(node)
    inverse = shape.is_leaf(left)
    if inverse and shape.is_leaf(right):
        raise MoveError(f"node {node} has two leaf children; nothing to re-associate")
    u = f_move(model, surface, shape, node, inverse)
    return u.rows.shape, u


def f_matrix(model: AnyonModel, a, b, c, d) -> Unitary:
    """F^{abc}_d as the change of coordinates from ((a b)_x c) to (a (b c)_y): rows y, cols x."""
    surface = StandardSurface((a, b, c), model.dual[d])
    u = f_move(model, surface, TreeShape.left_comb(3), (0, 3))
    return u


def r_scalar(model: AnyonModel, a, b, c) -> complex:
    if not model.N(a, b, c):
        raise ModelError(f"R[{model._fmt(a, b)}; {model._fmt(c)}] is not an admissible vertex")
    return model.R(a, b, c)


def _swap_map(span: Span, mid: int):
    lo, hi = span
    shift_left, shift_right = hi - mid, mid - lo

    def remap(s: Span) -> Span:
        if lo <= s[0] and s[1] <= mid:
            return s[0] + shift_left, s[1] + shift_left
        if mid <= s[0] and s[1] <= hi:
            return s[0] - shift_right, s[1] - shift_right
        return s

    return remap


def r_move(model: AnyonModel, surface: StandardSurface, shape: TreeShape,
           span: Span, inverse: bool = False) -> Unitary:
    """Exchange the two children of node ``span``.

    Counterclockwise: |(A B)_c> -> R[A,B;c] |(B A)_c>.
    Clockwise: |(A B)_c> -> conj(R[B,A;c]) |(B A)_c>.
    """
    span = tuple(span)
    try:
        left, right = shape.children(span)
    except ShapeError as exc:
        raise MoveError(str(exc)) from None
    lo, mid, hi = span[0], left[1], span[1]
    a = surface.interior
    new_surface = StandardSurface(a[:lo] + a[mid:hi] + a[lo:mid] + a[hi:], surface.exterior)
    new_shape = shape.swap_children(span)
    remap = _swap_map(span, mid)

    def rule(tree: FusionTree):
        ch = tree.charges
        x, y, c = ch[left], ch[right], ch[span]
        coeff = model.R(y, x, c).conjugate() if inverse else model.R(x, y, c)
        return [({remap(s): v for s, v in ch.items()}, coeff)]

    return _assemble(model, Basis(surface, shape), Basis(new_surface, new_shape), rule)


def dehn_twist(model: AnyonModel, surface: StandardSurface, shape: TreeShape | None,
               obs, inverse: bool = False) -> Unitary:
    """Multiply each charge sector of the observable by theta (clockwise full twist)."""
    shape = shape or TreeShape.left_comb(surface.n)
    span = tuple(getattr(obs, "span", obs))
    if span not in shape:
        raise MoveError(f"observable {span} is not a node of {shape}")
    if getattr(obs, "shape", shape) != shape:
        raise MoveError("observable belongs to a different decomposition")

    def rule(tree: FusionTree):
        t = model.theta(tree.charge(span))
        return [(tree.charges, t.conjugate() if inverse else t)]

    basis = Basis(surface, shape)
    return _assemble(model, basis, basis, rule)


def _z_forward(model: AnyonModel, surface: StandardSurface) -> Unitary:
    n = surface.n
    shape = TreeShape.left_comb(n)
    u = identity(model, surface, shape)
    for k in range(3, n + 1):
        u = f_move(model, surface, u.rows.shape, (0, k)) @ u
    if n <= 1:
        return Unitary(u.matrix, Basis(surface.rotate(), shape), u.cols)
    rotated = surface.rotate()
    target = Basis(rotated, TreeShape.left_comb(n))

    def rule(tree: FusionTree):
        ch = tree.charges
        new = {(lo - 1, hi - 1): v for (lo, hi), v in ch.items() if lo >= 1}
        new[0, n] = rotated.total_charge(model)
        return [(new, 1.0)]

    relabel = _assemble(model, u.rows, target, rule)
    return relabel @ u


def z_move(model: AnyonModel, surface: StandardSurface, shape: TreeShape | None = None,
           inverse: bool = False) -> Unitary:
    """Rotate so that hole 1 becomes the exterior: (a1 .. an; b) -> (a2 .. an b; a1).

    Both bases are left combs.  The forward map re-associates to (a1 (a2 .. an))
    and then identifies that tree with the rotated left comb label for label.
    """
    lc = TreeShape.left_comb(surface.n)
    if shape is not None and shape != lc:
        raise MoveError("Z-moves act on the left-comb decomposition only")
    if inverse:
        return _z_forward(model, surface.unrotate()).H
    return _z_forward(model, surface)


def move_matrix(model: AnyonModel, surface: StandardSurface, shape: TreeShape,
                move: Move) -> Unitary:
    """Matrix of one move from (surface, shape); the target basis is in ``rows``."""
    if move.kind == "Z":
        return z_move(model, surface, shape, move.inverse)
    lo, hi = move.span
    if hi > surface.n:
        raise MoveError(f"placement {move.span} exceeds {surface.n} holes")
    if move.kind == "F":
        return f_move(model, surface, shape, move.span, move.inverse)
    if move.kind == "T":
        return dehn_twist(model, surface, shape, move.span, move.inverse)
    # R
    if move.span in shape and not shape.is_leaf(move.span):
        return r_move(model, surface, shape, move.span, move.inverse)
    if hi - lo != 2:
        raise MoveError(f"R placement {move.span} is neither a node nor an adjacent hole pair")
    prep = pair_up(shape, lo)
    u = compose_moves(model, surface, shape, prep)
    u = r_move(model, u.rows.surface, u.rows.shape, move.span, move.inverse) @ u
    return compose_moves(model, u.rows.surface, u.rows.shape, inverse_sequence(prep)) @ u


def pair_up(shape: TreeShape, p: int) -> tuple[Move, ...]:
    """F-moves after which holes ``p`` and ``p + 1`` are the two children of one node."""
    moves = []
    while True:
        node = _lowest_common(shape, p, p + 1)
        left, right = shape.children(node)
        if left != (p, p + 1):
            moves.append(Move("F", node))
            shape = shape.rotate_right(node)
        elif right != (p + 1, p + 2):
            moves.append(Move("F", node, inverse=True))
            shape = shape.rotate_left(node)
        else:
            return tuple(moves)


def _lowest_common(shape: TreeShape, i: int, j: int) -> Span:
    best = None
    for s in shape.internal_nodes():
        if s[0] <= i and j < s[1] and (best is None or s[1] - s[0] < best[1] - best[0]):
            best = s
    return best


def compose_moves(model: AnyonModel, surface: StandardSurface, start_shape: TreeShape | None,
                  seq: Iterable[Move]) -> Unitary:
    """Execute ``seq`` left to right; returns M_k ... M_1 from the start basis."""
    u = identity(model, surface, start_shape)
    for i, move in enumerate(seq):
        try:
            u = move_matrix(model, u.rows.surface, u.rows.shape, move) @ u
        except (MoveError, ShapeError, ModelError) as exc:
            raise MoveError(str(exc), index=i) from None
    return u


def braid_generator(model: AnyonModel, surface: StandardSurface, i: int,
                    inverse: bool = False) -> Unitary:
    """Counterclockwise exchange of holes ``i`` and ``i + 1`` (1-based) in the left-comb basis.

    Columns: ``surface``.  Rows: ``surface`` with those two labels swapped.
    """
    if not 1 <= i <= surface.n - 1:
        raise WordError(f"generator index {i} out of range for {surface.n} holes")
    return move_matrix(
        model, surface, TreeShape.left_comb(surface.n), Move("R", (i - 1, i + 1), inverse)
    )


# ---------------------------------------------------------------------------
# braid words

Generator = tuple[str, int, int]  # ("s" | "t", 1-based index, +1 | -1)

_TOKEN = re.compile(r"([st])(\d+)(\^-1|\^1|\^\+1)?")


def parse_word(text: str | Sequence[Generator]) -> tuple[Generator, ...]:
    if not isinstance(text, str):
        return tuple((k, int(i), int(e)) for k, i, e in text)
    out = []
    for tok in text.split():
        m = _TOKEN.fullmatch(tok)
        if not m:
            raise WordError(f"malformed generator {tok!r}")
        kind, idx, exp = m.groups()
        if int(idx) < 1:
            raise WordError(f"generator indices start at 1: {tok!r}")
        out.append((kind, int(idx), -1 if exp == "^-1" else 1))
    return tuple(out)


def format_word(word: Sequence[Generator]) -> str:
    return " ".join(f"{k}{i}" + ("^-1" if e < 0 else "") for k, i, e in word)


def check_word(word: Sequence[Generator], n: int) -> None:
    for kind, i, e in word:
        hi = n - 1 if kind == "s" else n
        if kind not in ("s", "t") or e not in (1, -1):
            raise WordError(f"malformed generator {(kind, i, e)}")
        if not 1 <= i <= hi:
            raise WordError(f"generator {kind}{i} out of range for {n} strands")


def compile_word(model: AnyonModel, surface: StandardSurface, word) -> Unitary:
    """Unitary of a framed braid word; the rightmost generator acts first."""
    word = parse_word(word)
    check_word(word, surface.n)
    u = identity(model, surface)
    for kind, i, e in reversed(word):
        cur = u.rows.surface
        if kind == "s":
            g = braid_generator(model, cur, i, inverse=e < 0)
        else:
            g = dehn_twist(model, cur, u.rows.shape, (i - 1, i), inverse=e < 0)
        u = g @ u
    return u


compile = compile_word  # noqa: A001  (public name used by callers and the CLI)
