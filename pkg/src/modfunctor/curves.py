"""Curve diagrams encoded as framed braid words, and refactoring between them.

A diagram on a standard surface with ``n`` interior holes is a word in the
framed braid group on ``n + 1`` strands: strands ``1..n`` are the holes and
strand ``n + 1`` is the exterior boundary.  Generators involving the exterior
(``s<n>``, ``t<n+1>``) are what Z-moves produce; R- and twist-moves only touch
interior holes.

Isotopy classes are decided by a faithful invariant: the Artin action of the
braid on the free group of rank ``n + 1`` together with the strand
permutation and per-strand framing.

``exterior`` counts Z-moves modulo ``n + 1``.  With ``delta = s1 s2 ... sn``
the diagram (w, e) stands for the mapping class ``delta^e w``; a Z-move
replaces w by ``delta^-1 w delta``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .fusion import StandardSurface
from .model import AnyonModel
from .moves import (
    Generator,
    Move,
    MoveError,
    Unitary,
    WordError,
    check_word,
    compose_moves,
    format_word,
    inverse_sequence,
    parse_word,
)


class DiagramMismatchError(ValueError):
    """Two diagrams cannot be compared or refactored into each other."""


# ---------------------------------------------------------------------------
# words and normal forms


def invert_word(word: Sequence[Generator]) -> tuple[Generator, ...]:
    return tuple((k, i, -e) for k, i, e in reversed(word))


def free_reduce(word: Sequence[Generator]) -> tuple[Generator, ...]:
    out: list[Generator] = []
    for g in word:
        if out and out[-1][:2] == g[:2] and out[-1][2] == -g[2]:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def _reduce_letters(letters) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _inv_letters(w: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(w))


def _act(images: list, i: int, sign: int) -> None:
    """Right-multiply by s_i^sign (1-based ``i``), updating images in place."""
    a, b = images[i - 1], images[i]
    if sign > 0:
        images[i - 1] = _reduce_letters(a + b + _inv_letters(a))
        images[i] = a
    else:
        images[i - 1] = b
        images[i] = _reduce_letters(_inv_letters(b) + a + b)


@dataclass(frozen=True)
class NormalForm:
    """Complete invariant of a framed braid.

    ``permutation[p]`` is the strand (0-based) sitting at position ``p``;
    ``framing[s]`` is the net twist of strand ``s``; ``images[k]`` is the
    reduced image of free generator ``k + 1`` as a tuple of signed 1-based
    letters.
    """

    permutation: tuple[int, ...]
    framing: tuple[int, ...]
    images: tuple[tuple[int, ...], ...]

    @property
    def strands(self) -> int:
        return len(self.permutation)

    @property
    def complexity(self) -> int:
        return sum(len(w) for w in self.images)

    def braid_is_trivial(self) -> bool:
        return all(w == (k + 1,) for k, w in enumerate(self.images))

    def to_dict(self) -> dict:
        return {
            "permutation": [p + 1 for p in self.permutation],
            "framing": list(self.framing),
            "images": [list(w) for w in self.images],
        }


@lru_cache(maxsize=65536)
def _normal_form(strands: int, word: tuple[Generator, ...]) -> NormalForm:
    perm = list(range(strands))
    framing = [0] * strands
    images = [(k + 1,) for k in range(strands)]
    for kind, i, e in word:
        if kind == "s":
            _act(images, i, e)
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
        else:
            framing[perm[i - 1]] += e
    return NormalForm(tuple(perm), tuple(framing), tuple(images))


def word_normal_form(strands: int, word) -> NormalForm:
    """Normal form of a framed braid word on ``strands`` strands."""
    word = parse_word(word)
    check_word(word, strands)
    return _normal_form(strands, word)


def delta_word(n: int, power: int = 1) -> tuple[Generator, ...]:
    """``(s1 s2 ... sn)^power`` on ``n + 1`` strands."""
    d = tuple(("s", i, 1) for i in range(1, n + 1))
    if power < 0:
        d, power = invert_word(d), -power
    return d * power


# ---------------------------------------------------------------------------
# diagrams


@dataclass(frozen=True)
class CurveDiagram:
    """A curve diagram relative to the equatorial diagram of ``surface``."""

    surface: StandardSurface
    word: tuple[Generator, ...] = ()
    exterior: int = 0

    def __post_init__(self):
        object.__setattr__(self, "word", parse_word(self.word))
        check_word(self.word, self.strands)
        if not 0 <= self.exterior <= self.surface.n:
            raise DiagramMismatchError(f"exterior choice {self.exterior} out of range")
        if self.n == 1 and any(k == "s" for k, _, _ in self.word):
            self._fold_annulus()

    def _fold_annulus(self):
        # On an annulus, swapping hole and exterior is the rotation itself
        # (delta = s1), so s1^k is absorbed into the exterior choice.
        shift = sum(e for k, _, e in self.word if k == "s")
        prefix = (("s", 1, -1 if shift > 0 else 1),) * abs(shift)
        framing = _normal_form(2, prefix + self.word).framing
        word = ()
        for pos, k in enumerate(framing):
            word += (("t", pos + 1, 1 if k > 0 else -1),) * abs(k)
        object.__setattr__(self, "word", word)
        object.__setattr__(self, "exterior", (self.exterior + shift) % 2)

    @property
    def n(self) -> int:
        return self.surface.n

    @property
    def strands(self) -> int:
        return self.surface.n + 1

    def normal_form(self) -> NormalForm:
        return _normal_form(self.strands, self.word)

    def frame_labels(self) -> tuple[int, ...]:
        """Labels of (holes..., exterior) once the frame is rotated ``exterior`` times."""
        full = self.surface.interior + (self.surface.exterior,)
        e = self.exterior
        return full[e:] + full[:e]

    def domain(self) -> StandardSurface:
        """The labelled standard surface this diagram maps from."""
        labels = self.frame_labels()
        perm = self.normal_form().permutation
        placed = tuple(labels[s] for s in perm)
        return StandardSurface(placed[:-1], placed[-1])

    def to_dict(self, model: AnyonModel) -> dict:
        return {
            "surface": self.surface.to_dict(model),
            "exterior": self.exterior,
            "word": format_word(self.word),
        }

    @classmethod
    def from_dict(cls, model: AnyonModel, doc: dict) -> "CurveDiagram":
        surface = StandardSurface.from_dict(model, doc["surface"])
        return cls(surface, parse_word(doc.get("word", "")), int(doc.get("exterior", 0)))


def normal_form(d: CurveDiagram) -> NormalForm:
    return d.normal_form()


def equal(d1: CurveDiagram, d2: CurveDiagram) -> bool:
    if d1.surface != d2.surface:
        raise DiagramMismatchError("diagrams live on different surfaces")
    if d1.exterior != d2.exterior:
        raise DiagramMismatchError(
            "diagrams use different exterior choices; apply Z-moves before comparing"
        )
    return d1.normal_form() == d2.normal_form()


def _move_word(d: CurveDiagram, m: Move) -> tuple[Generator, ...]:
    sign = -1 if m.inverse else 1
    lo, hi = m.span
    if m.kind == "R":
        if hi - lo != 2 or hi > d.n:
            raise MoveError(f"R-move needs two adjacent interior holes, got {m}")
        return (("s", lo + 1, sign),)
    if m.kind == "T":
        if hi - lo != 1 or hi > d.n:
            raise MoveError(f"twist needs a single interior hole, got {m}")
        return (("t", lo + 1, sign),)
    raise MoveError(f"{m.kind}-moves do not act on curve diagrams")


def apply_move(d: CurveDiagram, m: Move) -> CurveDiagram:
    """Precompose ``d`` with the mapping class of ``m``."""
    if m.kind == "Z":
        n = d.n
        if m.inverse:
            word = delta_word(n) + d.word + delta_word(n, -1)
            ext = (d.exterior - 1) % (n + 1)
        else:
            word = delta_word(n, -1) + d.word + delta_word(n)
            ext = (d.exterior + 1) % (n + 1)
        return CurveDiagram(d.surface, free_reduce(word), ext)
    return CurveDiagram(d.surface, d.word + _move_word(d, m), d.exterior)


def apply_moves(d: CurveDiagram, seq: Sequence[Move]) -> CurveDiagram:
    for m in seq:
        d = apply_move(d, m)
    return d


# ---------------------------------------------------------------------------
# refactoring


def generator_moves(g: Generator, n: int) -> tuple[Move, ...]:
    """Moves realising one generator on ``n + 1`` strands in the current frame."""
    kind, i, e = g
    inv = e < 0
    if kind == "s":
        if i < n:
            return (Move("R", (i - 1, i + 1), inv),)
        return (Move("Z"), Move("R", (n - 2, n), inv), Move("Z", inverse=True))
    if i <= n:
        return (Move("T", (i - 1, i), inv),)
    return (Move("Z"), Move("T", (n - 1, n), inv), Move("Z", inverse=True))


def cancel_moves(seq: Sequence[Move]) -> tuple[Move, ...]:
    """Drop adjacent move/inverse pairs."""
    out: list[Move] = []
    for m in seq:
        if out and out[-1] == m.inv:
            out.pop()
        else:
            out.append(m)
    return tuple(out)


def _word_moves(word: Sequence[Generator], n: int) -> list[Move]:
    out: list[Move] = []
    for g in word:
        out.extend(generator_moves(g, n))
    return out


def _fix_framing(d: CurveDiagram, target: CurveDiagram) -> list[Move]:
    """Twist moves that make ``d`` match ``target`` once the braids agree."""
    nf, goal = d.normal_form(), target.normal_form()
    moves: list[Move] = []
    for pos, strand in enumerate(nf.permutation):
        k = goal.framing[strand] - nf.framing[strand]
        g = ("t", pos + 1, 1 if k > 0 else -1)
        moves.extend(_word_moves([g] * abs(k), d.n))
    return moves


def _braid_part(word: Sequence[Generator]) -> tuple[Generator, ...]:
    return free_reduce([g for g in word if g[0] == "s"])


def _peel(word: tuple[Generator, ...], strands: int) -> tuple[Generator, ...]:
    """Rewrite a braid word greedily, always peeling the generator that shrinks the images most.

    Falls back to the leftover word when no single generator helps.
    """
    nf = _normal_form(strands, word)
    images = list(nf.images)
    size = nf.complexity
    peeled: list[Generator] = []
    while size > strands:
        best = None
        for i in range(1, strands):
            for sign in (1, -1):
                trial = list(images)
                _act(trial, i, -sign)
                cost = sum(len(w) for w in trial)
                if cost < size and (best is None or cost < best[0]):
                    best = (cost, i, sign, trial)
        if best is None:
            break
        size, i, sign, images = best
        peeled.append(("s", i, sign))
    if size > strands or any(w != (k + 1,) for k, w in enumerate(images)):
        rest = free_reduce(tuple(word) + invert_word(tuple(reversed(peeled))))
        return rest + tuple(reversed(peeled))
    return tuple(reversed(peeled))


REFACTOR_METHODS = ("word", "untangle")


def refactor(f: CurveDiagram, target: CurveDiagram, method: str = "word") -> tuple[Move, ...]:
    """A sequence of R-, Z- and twist-moves taking ``f`` to a diagram equal to ``target``.

    ``"word"`` undoes the word of ``f`` and replays that of ``target`` with free
    cancellation; its length is at most 3(|w_f| + |w_target|) + n.
    ``"untangle"`` moves to the target frame first and then rewrites the
    relative braid by greedy reduction of its free-group images, giving an
    independent route between the same diagrams.
    """
    if f.surface != target.surface:
        raise DiagramMismatchError("source and target diagrams live on different surfaces")
    n = f.n
    k = (target.exterior - f.exterior) % (n + 1)
    if method == "word":
        if k == 0:
            braid = _braid_part(invert_word(f.word) + target.word)
            seq = _word_moves(braid, n)
        else:
            seq = (
                _word_moves(_braid_part(invert_word(f.word)), n)
                + [Move("Z")] * k
                + _word_moves(_braid_part(target.word), n)
            )
    elif method == "untangle":
        rotated = invert_word(delta_word(n, -k) + f.word + delta_word(n, k))
        relative = _braid_part(rotated + target.word)
        seq = [Move("Z")] * k + _word_moves(_peel(relative, n + 1), n)
    else:
        raise ValueError(f"unknown refactor method {method!r}; choose from {REFACTOR_METHODS}")
    seq = list(cancel_moves(seq))
    seq += _fix_framing(apply_moves(f, seq), target)
    result = cancel_moves(seq)
    if not equal(apply_moves(f, result), target):
        raise AssertionError("refactoring produced a sequence that misses the target")
    return result


def induced_unitary(model: AnyonModel, f: CurveDiagram, target: CurveDiagram,
                    seq: Sequence[Move]) -> Unitary:
    """Fusion-space unitary of ``seq`` run from the left-comb basis of ``f``'s domain."""
    u = compose_moves(model, f.domain(), None, seq)
    if u.rows.surface != target.domain():
        raise DiagramMismatchError("sequence does not end on the target diagram's domain")
    return u


__all__ = [
    "CurveDiagram", "DiagramMismatchError", "NormalForm", "REFACTOR_METHODS", "WordError",
    "apply_move", "apply_moves", "cancel_moves", "delta_word", "equal", "free_reduce",
    "generator_moves", "induced_unitary", "inverse_sequence", "invert_word", "normal_form",
    "refactor", "word_normal_form",
]
