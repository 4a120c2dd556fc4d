"""Weighted context constraints: the representation shared by every model
source (learned trees, n-grams, hand-written rules), plus the text format.

A constraint pairs a compatibility value with a target (optional word-form
set, tag) and a context pattern over neighbouring positions.  Context items
either carry explicit signed offsets (``1:[RB] 2:[IN]``) or are positional,
in which case offsets follow from adjacency; a positional item may be
repeated (``(-[VBN IN])+``), matching a span of zero or more positions that
fits inside the sentence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from .corpus import TagSet
from .trees import OUT_OF_SENTENCE, DecisionTree, TreeNode, attribute_offset


class ConstraintParseError(ValueError):
    """Constraint text that does not follow the grammar."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ContextItem:
    """One test in a constraint context.

    Exactly one of ``tags``/``words`` is set.  ``offset`` is the signed
    distance from the target for explicit items and None for positional or
    repeated items.  A negated test matches the probability mass (or words)
    outside its set.
    """

    tags: frozenset[str] | None = None
    words: frozenset[str] | None = None
    negated: bool = False
    offset: int | None = None
    repeated: bool = False

    def __post_init__(self):
        if (self.tags is None) == (self.words is None):
            raise ValueError("context item needs exactly one of tags/words")
        if not (self.tags or self.words):
            raise ValueError("empty test set")
        if self.offset == 0:
            raise ValueError("context offsets exclude the target position")
        if self.repeated and self.offset is not None:
            raise ValueError("repeated items cannot carry a fixed offset")


@dataclass(frozen=True)
class Constraint:
    """Compatibility statement between a (word set, tag) target and a context.

    ``left``/``right`` hold the context items on each side of the target,
    leftmost first.  Explicit-offset items and repeated items never mix
    within one constraint.
    """

    compatibility: float
    target_tag: str
    target_words: frozenset[str] | None = None
    left: tuple[ContextItem, ...] = ()
    right: tuple[ContextItem, ...] = ()

    def __post_init__(self):
        if not math.isfinite(self.compatibility):
            raise ValueError("compatibility must be finite")
        items = self.left + self.right
        if not items and self.target_words is None:
            raise ValueError("constraint with no context and no target words is a bare prior")
        if any(it.repeated for it in items):
            if any(it.offset is not None for it in items):
                raise ValueError("cannot mix explicit offsets with repeated items")
            self._check_repeated(self.left)
            self._check_repeated(tuple(reversed(self.right)))
        else:
            if any(it.offset is None for it in items):
                raise ValueError("non-repeated constraints need explicit offsets")
            object.__setattr__(self, "left", tuple(sorted(self.left, key=lambda i: i.offset)))
            object.__setattr__(self, "right", tuple(sorted(self.right, key=lambda i: i.offset)))
            offsets = [it.offset for it in self.left + self.right]
            if len(set(offsets)) != len(offsets):
                raise ValueError("duplicate context offsets")
            if any(it.offset >= 0 for it in self.left) or any(it.offset <= 0 for it in self.right):
                raise ValueError("left items need negative offsets, right items positive")

    @staticmethod
    def _check_repeated(outermost_first: tuple[ContextItem, ...]):
        # A repeated item needs a positioned anchor on its outer side; the
        # target anchors the inner side.
        for k, item in enumerate(outermost_first):
            if item.repeated and (k == 0 or outermost_first[k - 1].repeated):
                raise ValueError("repeated items must sit between positioned anchors")

    @property
    def context(self) -> tuple[ContextItem, ...]:
        return self.left + self.right


class ConstraintSet:
    """Constraints grouped by target tag, with a source label."""

    def __init__(self, constraints: Iterable[Constraint] = (), source: str = ""):
        self.source = source
        self._all: list[Constraint] = []
        self._by_tag: dict[str, list[Constraint]] = {}
        for c in constraints:
            self.add(c)

    def add(self, constraint: Constraint) -> None:
        self._all.append(constraint)
        self._by_tag.setdefault(constraint.target_tag, []).append(constraint)

    def lookup(self, word: str, tag: str) -> list[Constraint]:
        """All constraints whose target matches the (word, candidate tag) pair."""
        return [
            c
            for c in self._by_tag.get(tag, ())
            if c.target_words is None or word in c.target_words
        ]

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self._all)

    def __len__(self) -> int:
        return len(self._all)

    @classmethod
    def union(cls, sets: Iterable["ConstraintSet"], source: str | None = None) -> "ConstraintSet":
        sets = list(sets)
        if source is None:
            source = "+".join(s.source for s in sets if s.source)
        out = cls(source=source)
        for s in sets:
            for c in s:
                out.add(c)
        return out


# ---------------------------------------------------------------------------
# Tree compilation


def compile_tree(tree: DecisionTree, class_prior: Sequence[float] | None = None) -> list[Constraint]:
    """Translate every root-to-leaf path into one constraint per class tag.

    The path's (attribute, value-group) tests become the context: tag tests
    at the attribute's offset, the word-form test the target word set.  The
    compatibility of tag t is log2(p_leaf(t) / p_prior(t)) with the prior
    taken from the tree root, so it is positive exactly when the context
    raises the tag's probability above its class baseline.

    The degenerate path with no tests at all (a root-only tree) emits
    nothing: with no context the leaf equals the prior and the information
    already lives in the lexicon.
    """
    prior = np.asarray(class_prior, dtype=float) if class_prior is not None else tree.root.distribution
    if prior.size != len(tree.class_tags):
        raise ValueError("prior size does not match the class tags")
    out: list[Constraint] = []

    def walk(node: TreeNode, items: list[ContextItem], words: frozenset[str] | None):
        if not node.is_leaf:
            off = attribute_offset(node.attribute)
            for group, child in node.branches:
                if off is None:
                    walk(child, items, frozenset(group))
                else:
                    walk(child, items + [ContextItem(tags=frozenset(group), offset=off)], words)
            return
        if not items and words is None:
            return
        left = tuple(sorted((it for it in items if it.offset < 0), key=lambda it: it.offset))
        right = tuple(sorted((it for it in items if it.offset > 0), key=lambda it: it.offset))
        for k, tag in enumerate(tree.class_tags):
            compat = math.log2(float(node.distribution[k]) / float(prior[k]))
            out.append(Constraint(compat, tag, words, left, right))

    walk(tree.root, [], None)
    return out


# ---------------------------------------------------------------------------
# Instantiation

_INAPPLICABLE = object()

Factor = tuple[int, frozenset[str], bool]  # (position, tag set, negated)


def _bind_fixed(item: ContextItem, pos: int, words: Sequence[str]):
    """Resolve one item at an absolute position.

    Returns a factor, None when the item is satisfied without contributing a
    factor (word tests, out-of-sentence positions), or the inapplicable
    marker.  Positions outside the sentence carry all their mass on the
    OUT_OF_SENTENCE pseudo-tag, so tag sets naming it match the boundary.
    """
    inside = 0 <= pos < len(words)
    if item.words is not None:
        if not inside:
            return _INAPPLICABLE
        return None if (words[pos] in item.words) != item.negated else _INAPPLICABLE
    if inside:
        return (pos, item.tags, item.negated)
    boundary = OUT_OF_SENTENCE in item.tags
    return None if boundary != item.negated else _INAPPLICABLE


def _span_factor(item: ContextItem, pos: int, words: Sequence[str]):
    """Like _bind_fixed but for repeated-span positions, always in-sentence."""
    if item.words is not None:
        return None if (words[pos] in item.words) != item.negated else _INAPPLICABLE
    return (pos, item.tags, item.negated)


def _side_anchorings(
    nearest_first: tuple[ContextItem, ...],
    step: int,
    i: int,
    words: Sequence[str],
) -> list[tuple[Factor, ...]]:
    """Enumerate the ways one side of the context can bind around word i."""
    n = len(words)

    def rec(k: int, next_off: int) -> list[tuple[Factor, ...]]:
        if k == len(nearest_first):
            return [()]
        item = nearest_first[k]
        if not item.repeated:
            off = item.offset if item.offset is not None else next_off
            bound = _bind_fixed(item, i + off, words)
            if bound is _INAPPLICABLE:
                return []
            head = () if bound is None else (bound,)
            return [head + rest for rest in rec(k + 1, off + step)]
        # Repeated item: spans of length 0, 1, ... that fit inside the
        # sentence, growing outward from next_off.
        results: list[tuple[Factor, ...]] = []
        span: list[Factor] = []
        length = 0
        while True:
            results.extend(tuple(span) + rest for rest in rec(k + 1, next_off + step * length))
            pos = i + next_off + step * length
            if not 0 <= pos < n:
                break
            bound = _span_factor(item, pos, words)
            if bound is _INAPPLICABLE:
                break
            if bound is not None:
                span.append(bound)
            length += 1
        return results

    return rec(0, step)


def instantiate(
    constraint: Constraint, words: Sequence[str], i: int, j: str
) -> list[tuple[Factor, ...]]:
    """All ways the constraint applies to candidate tag ``j`` of word ``i``.

    Each result is a factor list ready for influence computation; the target
    pair itself never appears as a factor.  Returns [] when the target does
    not match or no anchoring fits the sentence.
    """
    if j != constraint.target_tag:
        return []
    if constraint.target_words is not None and words[i] not in constraint.target_words:
        return []
    lefts = _side_anchorings(tuple(reversed(constraint.left)), -1, i, words)
    if not lefts:
        return []
    rights = _side_anchorings(constraint.right, +1, i, words)
    return [
        tuple(sorted(lf + rf, key=lambda f: f[0])) for lf in lefts for rf in rights
    ]


# ---------------------------------------------------------------------------
# Text format

_NUMBER_CHARS = set("+-0123456789.eE")


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1

    def error(self, message: str) -> ConstraintParseError:
        return ConstraintParseError(message, self.line)

    def skip_space(self) -> None:
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == "\n":
                self.line += 1
                self.pos += 1
            elif c.isspace():
                self.pos += 1
            elif c == "#":
                while self.pos < len(self.text) and self.text[self.pos] != "\n":
                    self.pos += 1
            else:
                break

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        c = self.text[self.pos]
        if c == "\n":
            self.line += 1
        self.pos += 1
        return c

    def expect(self, c: str) -> None:
        if self.peek() != c:
            raise self.error(f"expected {c!r}, found {self.peek()!r}")
        self.take()


def _scan_number(sc: _Scanner) -> float:
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos] in _NUMBER_CHARS:
        sc.pos += 1
    token = sc.text[start : sc.pos]
    try:
        return float(token)
    except ValueError:
        raise sc.error(f"bad number {token!r}") from None


def _scan_int(sc: _Scanner) -> int:
    start = sc.pos
    if sc.peek() in "+-":
        sc.pos += 1
    while sc.peek().isdigit():
        sc.pos += 1
    token = sc.text[start : sc.pos]
    if not token.lstrip("+-"):
        raise sc.error("expected an integer offset")
    return int(token)


def _scan_word(sc: _Scanner) -> str:
    sc.expect('"')
    start = sc.pos
    while not sc.at_end() and sc.peek() not in '"\n':
        sc.pos += 1
    if sc.peek() != '"':
        raise sc.error("unterminated quoted word")
    word = sc.text[start : sc.pos]
    sc.take()
    if not word:
        raise sc.error("empty quoted word")
    return word


def _scan_atom(sc: _Scanner) -> str:
    start = sc.pos
    while not sc.at_end() and not sc.peek().isspace() and sc.peek() != "]":
        sc.pos += 1
    atom = sc.text[start : sc.pos]
    if not atom:
        raise sc.error("expected a tag")
    return atom


def _scan_set(sc: _Scanner, tagset: TagSet | None) -> tuple[str, frozenset[str]]:
    """``[ ... ]`` holding either bare tags or quoted words, not mixed."""
    sc.expect("[")
    tags: set[str] = set()
    words: set[str] = set()
    while True:
        sc.skip_space()
        if sc.at_end():
            raise sc.error("unbalanced brackets: missing ']'")
        if sc.peek() == "]":
            sc.take()
            break
        if sc.peek() == '"':
            words.add(_scan_word(sc))
        else:
            tag = _scan_atom(sc)
            if tagset is not None and tag not in tagset and tag != OUT_OF_SENTENCE:
                raise sc.error(f"unknown tag {tag!r}")
            tags.add(tag)
    if tags and words:
        raise sc.error("a set cannot mix tags and quoted words")
    if not tags and not words:
        raise sc.error("empty set")
    return ("words", frozenset(words)) if words else ("tags", frozenset(tags))


def _scan_macro_name(sc: _Scanner) -> str:
    sc.expect("%")
    start = sc.pos
    while not sc.at_end() and sc.peek() != "%" and not sc.peek().isspace():
        sc.pos += 1
    if sc.peek() != "%":
        raise sc.error("unterminated macro name")
    name = sc.text[start : sc.pos]
    sc.take()
    if not name:
        raise sc.error("empty macro name")
    return name


def _scan_test(
    sc: _Scanner, macros: dict[str, tuple[str, frozenset[str]]], tagset: TagSet | None
) -> tuple[frozenset[str] | None, frozenset[str] | None, bool]:
    negated = False
    if sc.peek() == "-":
        negated = True
        sc.take()
        sc.skip_space()
    if sc.peek() == "[":
        kind, values = _scan_set(sc, tagset)
    elif sc.peek() == "%":
        name = _scan_macro_name(sc)
        if name not in macros:
            raise sc.error(f"unknown macro %{name}%")
        kind, values = macros[name]
    elif sc.peek() == '"':
        kind, values = "words", frozenset({_scan_word(sc)})
    else:
        raise sc.error(f"expected a test, found {sc.peek()!r}")
    if kind == "tags":
        return values, None, negated
    return None, values, negated


def _scan_target(
    sc: _Scanner, tagset: TagSet | None
) -> tuple[frozenset[str] | None, str]:
    sc.expect("<")
    sc.skip_space()
    words: frozenset[str] | None = None
    if sc.peek() == "[":
        kind, values = _scan_set(sc, None)
        if kind != "words":
            raise sc.error("target word set must contain quoted words")
        words = values
        sc.skip_space()
        sc.expect(",")
        sc.skip_space()
    start = sc.pos
    while not sc.at_end() and sc.peek() not in ">\n":
        sc.pos += 1
    tag = sc.text[start : sc.pos].strip()
    if sc.peek() != ">":
        raise sc.error("unterminated target")
    sc.take()
    if not tag or any(c.isspace() for c in tag):
        raise sc.error(f"bad target tag {tag!r}")
    if tagset is not None and tag not in tagset:
        raise sc.error(f"unknown tag {tag!r}")
    return words, tag


def _scan_constraint(
    sc: _Scanner, macros: dict[str, tuple[str, frozenset[str]]], tagset: TagSet | None
) -> Constraint:
    line = sc.line
    compatibility = _scan_number(sc)
    before: list[ContextItem] = []
    after: list[ContextItem] = []
    target: tuple[frozenset[str] | None, str] | None = None
    while True:
        sc.skip_space()
        if sc.at_end():
            raise ConstraintParseError("missing ';'", sc.line)
        c = sc.peek()
        if c == ";":
            sc.take()
            break
        if c == "<":
            if target is not None:
                raise sc.error("duplicate target")
            target = _scan_target(sc, tagset)
            continue
        side = before if target is None else after
        if c == "(":
            sc.take()
            sc.skip_space()
            tags, words, negated = _scan_test(sc, macros, tagset)
            sc.skip_space()
            sc.expect(")")
            repeated = sc.peek() == "+"
            if repeated:
                sc.take()
            item_args = {"tags": tags, "words": words, "negated": negated, "repeated": repeated}
        elif c.isdigit() or c in "+-":
            offset = _scan_int(sc)
            sc.expect(":")
            sc.skip_space()
            tags, words, negated = _scan_test(sc, macros, tagset)
            item_args = {"tags": tags, "words": words, "negated": negated, "offset": offset}
        else:
            raise sc.error(f"unexpected {c!r} in constraint")
        try:
            side.append(ContextItem(**item_args))
        except ValueError as exc:
            raise sc.error(str(exc)) from None
    if target is None:
        raise ConstraintParseError("constraint without a target", line)
    items = before + after
    explicit = [it for it in items if it.offset is not None]
    if explicit and len(explicit) != len(items):
        raise ConstraintParseError(
            "cannot mix positional and explicit-offset items", line
        )
    try:
        if explicit:
            left = tuple(it for it in items if it.offset < 0)
            right = tuple(it for it in items if it.offset > 0)
        else:
            # Positional items: adjacency fixes the offsets unless a
            # repeated item makes them variable.
            if not any(it.repeated for it in items):
                before = [
                    ContextItem(it.tags, it.words, it.negated, offset=k - len(before))
                    for k, it in enumerate(before)
                ]
                after = [
                    ContextItem(it.tags, it.words, it.negated, offset=k + 1)
                    for k, it in enumerate(after)
                ]
            left, right = tuple(before), tuple(after)
        return Constraint(compatibility, target[1], target[0], left, right)
    except ValueError as exc:
        raise ConstraintParseError(str(exc), line) from None


def parse_constraints(
    text: str, tagset: TagSet | None = None
) -> tuple[list[Constraint], dict[str, tuple[str, frozenset[str]]]]:
    """Parse a constraint file; returns the constraints and the macro table.

    Macros (``%name% = [...];``) expand textually, before constraint
    construction, and cannot reference other macros.  When a tag set is
    supplied, every bare tag is validated against it (the out-of-sentence
    marker is always allowed).
    """
    sc = _Scanner(text)
    macros: dict[str, tuple[str, frozenset[str]]] = {}
    constraints: list[Constraint] = []
    while True:
        sc.skip_space()
        if sc.at_end():
            break
        if sc.peek() == "%":
            name = _scan_macro_name(sc)
            sc.skip_space()
            sc.expect("=")
            sc.skip_space()
            macros[name] = _scan_set(sc, tagset)
            sc.skip_space()
            sc.expect(";")
        else:
            constraints.append(_scan_constraint(sc, macros, tagset))
    return constraints, macros


def _format_set(values: frozenset[str], quoted: bool) -> str:
    if quoted:
        return "[" + " ".join(f'"{w}"' for w in sorted(values)) + "]"
    return "[" + " ".join(sorted(values)) + "]"


def _format_test(item: ContextItem) -> str:
    body = _format_set(item.tags, False) if item.tags is not None else _format_set(item.words, True)
    return ("-" if item.negated else "") + body


def serialize_constraint(constraint: Constraint) -> str:
    parts = [repr(constraint.compatibility)]
    explicit = all(it.offset is not None for it in constraint.context)

    def fmt(item: ContextItem) -> str:
        if explicit:
            return f"{item.offset}:{_format_test(item)}"
        return f"({_format_test(item)})" + ("+" if item.repeated else "")

    parts.extend(fmt(it) for it in constraint.left)
    target = constraint.target_tag
    if constraint.target_words is not None:
        target = f"{_format_set(constraint.target_words, True)},{target}"
    parts.append(f"<{target}>")
    parts.extend(fmt(it) for it in constraint.right)
    return " ".join(parts) + ";"


def serialize_constraints(constraints: Iterable[Constraint]) -> str:
    """Canonical text form; parsing it back reproduces the constraints."""
    return "".join(serialize_constraint(c) + "\n" for c in constraints)


def read_constraints(
    path: str | Path, tagset: TagSet | None = None, source: str = "hand-written"
) -> ConstraintSet:
    constraints, _ = parse_constraints(Path(path).read_text(encoding="utf-8"), tagset)
    return ConstraintSet(constraints, source=source)


def write_constraints(constraints: Iterable[Constraint], path: str | Path) -> None:
    Path(path).write_text(serialize_constraints(constraints), encoding="utf-8")
