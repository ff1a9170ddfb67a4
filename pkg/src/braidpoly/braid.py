"""Braid words on Artin generators and the closure-class rewriting search.

A braid word is a strand count n together with a sequence of nonzero signed
letters: letter e stands for the generator x_{|e|} (crossing sign = sign of
e, 1 <= |e| <= n-1).  The rewriting search explores the closure-equivalence
class of a positive word generated by cyclic rotation, far commutation
(x_i x_j = x_j x_i for |i-j| >= 2) and the braid relation
(x_i x_{i+1} x_i = x_{i+1} x_i x_{i+1}), looking for a split, a Markov
destabilization, a repeated-generator square, or an all-distinct witness.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

DEFAULT_SEARCH_BUDGET = 100_000


class BraidParseError(ValueError):
    """Raised when a word cannot be parsed; the message names the bad token."""


class SearchBudgetExceeded(RuntimeError):
    """Raised when a class search runs out of budget without a verdict."""


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on `strands` strands."""

    strands: int
    letters: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise ValueError("strand count must be at least 1")
        object.__setattr__(self, "letters", tuple(self.letters))
        for e in self.letters:
            if e == 0:
                raise ValueError("letters must be nonzero")
            if abs(e) > self.strands - 1:
                raise ValueError(
                    f"letter {e} out of range for {self.strands} strands"
                )

    def __len__(self) -> int:
        return len(self.letters)

    def is_positive(self) -> bool:
        return all(e > 0 for e in self.letters)

    def permutation(self) -> Tuple[int, ...]:
        """Strand permutation of the word: position p ends at perm[p] (0-based)."""
        perm = list(range(self.strands))
        for e in self.letters:
            i = abs(e) - 1
            perm[i], perm[i + 1] = perm[i + 1], perm[i]
        # perm now records which strand sits at each bottom position; invert
        # so that perm[top] = bottom.
        out = [0] * self.strands
        for pos, strand in enumerate(perm):
            out[strand] = pos
        return tuple(out)

    def writhe(self) -> int:
        return sum(1 if e > 0 else -1 for e in self.letters)

    def __str__(self) -> str:
        body = " ".join(str(e) for e in self.letters)
        return f"B{self.strands}: {body}".rstrip()

    def to_json(self) -> dict:
        return {"strands": self.strands, "letters": list(self.letters)}

    @classmethod
    def from_json(cls, data) -> "BraidWord":
        return cls(int(data["strands"]), tuple(int(e) for e in data["letters"]))


@dataclass(frozen=True)
class Template:
    """A fixed generator sequence with an integer exponent per slot."""

    strands: int
    indices: Tuple[int, ...]
    exponents: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(self.indices))
        object.__setattr__(self, "exponents", tuple(self.exponents))
        if len(self.indices) != len(self.exponents):
            raise ValueError("indices and exponents must have equal length")
        for i in self.indices:
            if not 1 <= i <= self.strands - 1:
                raise ValueError(f"generator index {i} out of range")

    def __len__(self) -> int:
        return len(self.indices)

    def to_word(self) -> BraidWord:
        letters: List[int] = []
        for i, a in zip(self.indices, self.exponents):
            letters.extend([i if a > 0 else -i] * abs(a))
        return BraidWord(self.strands, tuple(letters))

    def with_exponents(self, exponents: Sequence[int]) -> "Template":
        return Template(self.strands, self.indices, tuple(exponents))

    @classmethod
    def from_word(cls, word: BraidWord) -> "Template":
        """Run-length encode a word; runs with zero net exponent are dropped."""
        indices: List[int] = []
        exponents: List[int] = []
        for e in word.letters:
            i = abs(e)
            sign = 1 if e > 0 else -1
            if indices and indices[-1] == i:
                exponents[-1] += sign
                if exponents[-1] == 0:
                    indices.pop()
                    exponents.pop()
            else:
                indices.append(i)
                exponents.append(sign)
        return cls(word.strands, tuple(indices), tuple(exponents))


@dataclass(frozen=True)
class SimplePartition:
    """Decreasing partition (parts >= 2) naming a conjugacy class of simple braids."""

    parts: Tuple[int, ...]
    strands: int

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        prev = None
        for a in self.parts:
            if a < 2:
                raise ValueError("partition parts must be at least 2")
            if prev is not None and a > prev:
                raise ValueError("partition parts must be decreasing")
            prev = a
        if sum(self.parts) > self.strands:
            raise ValueError("partition does not fit in the strand count")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def degree(self) -> int:
        """Letter count of the canonical word (sum of parts minus part count)."""
        return self.size - len(self.parts)

    @property
    def closure_components(self) -> int:
        return self.strands - self.degree

    @property
    def unlink_exponent(self) -> int:
        return self.closure_components - 1


# ---------------------------------------------------------------------------
# Rewrite outcomes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SquareFound:
    """A class word carrying x_i x_i adjacently; the pair sits at `position`."""

    position: int
    witness: BraidWord


@dataclass(frozen=True)
class Destabilizable:
    """A class word using the top generator exactly once (Markov-removable)."""

    witness: BraidWord


@dataclass(frozen=True)
class Splittable:
    """The closure is a distant union: two sub-words plus isolated unknots."""

    left: Optional[BraidWord]
    right: Optional[BraidWord]
    unknots: int


@dataclass(frozen=True)
class DistinctLetters:
    """A class word in which no generator index repeats (a simple braid)."""

    witness: BraidWord


@dataclass(frozen=True)
class Exhausted:
    """Search budget spent without a verdict."""

    explored: int


RewriteOutcome = Union[SquareFound, Destabilizable, Splittable, DistinctLetters, Exhausted]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_B_FORM = re.compile(r"^\s*B(\d+)\s*:\s*(.*)$", re.IGNORECASE)
_CARET_TOKEN = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def parse_word(text: str) -> BraidWord:
    """Parse either "Bn: e1 e2 ..." or caret form "x1 x2^3 x1^-1 @n"."""
    match = _B_FORM.match(text)
    if match:
        strands = int(match.group(1))
        letters: List[int] = []
        for token in match.group(2).split():
            try:
                e = int(token)
            except ValueError:
                raise BraidParseError(f"malformed letter {token!r}") from None
            if e == 0:
                raise BraidParseError("letter 0 is not a generator")
            if abs(e) > strands - 1:
                raise BraidParseError(
                    f"letter {token!r} out of range for {strands} strands"
                )
            letters.append(e)
        return BraidWord(strands, tuple(letters))
    return _parse_caret(text)


def _parse_caret(text: str) -> BraidWord:
    tokens = text.split()
    if not tokens:
        raise BraidParseError("empty word text (no strand count)")
    strands: Optional[int] = None
    pairs: List[Tuple[int, int]] = []
    for token in tokens:
        if token.startswith("@"):
            try:
                strands = int(token[1:])
            except ValueError:
                raise BraidParseError(f"malformed strand count {token!r}") from None
            continue
        m = _CARET_TOKEN.match(token)
        if not m:
            raise BraidParseError(f"malformed token {token!r}")
        index = int(m.group(1))
        exponent = int(m.group(2)) if m.group(2) is not None else 1
        if index < 1:
            raise BraidParseError(f"generator index in {token!r} must be positive")
        pairs.append((index, exponent))
    if strands is None:
        strands = max((i for i, _ in pairs), default=0) + 1
    letters: List[int] = []
    for index, exponent in pairs:
        if index > strands - 1:
            raise BraidParseError(
                f"token x{index} out of range for {strands} strands"
            )
        letters.extend([index if exponent > 0 else -index] * abs(exponent))
    return BraidWord(strands, tuple(letters))


# ---------------------------------------------------------------------------
# Closure combinatorics
# ---------------------------------------------------------------------------


def closure_components(word: BraidWord) -> int:
    """Number of link components of the closure (cycles of the permutation)."""
    perm = word.permutation()
    seen = [False] * word.strands
    cycles = 0
    for start in range(word.strands):
        if seen[start]:
            continue
        cycles += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = perm[p]
    return cycles


def cycle_partition(word: BraidWord) -> SimplePartition:
    """Partition of permutation-cycle lengths >= 2, sorted decreasingly."""
    perm = word.permutation()
    seen = [False] * word.strands
    lengths: List[int] = []
    for start in range(word.strands):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = True
            p = perm[p]
            length += 1
        if length >= 2:
            lengths.append(length)
    return SimplePartition(tuple(sorted(lengths, reverse=True)), word.strands)


# ---------------------------------------------------------------------------
# Word transforms
# ---------------------------------------------------------------------------


def mirror(word: BraidWord) -> BraidWord:
    """Negate every crossing; the closure becomes the mirror link."""
    return BraidWord(word.strands, tuple(-e for e in word.letters))


def reverse(word: BraidWord) -> BraidWord:
    """Reverse the letter order (reverses orientation of every component)."""
    return BraidWord(word.strands, tuple(reversed(word.letters)))


def shift(word: BraidWord, offset: int, strands: Optional[int] = None) -> BraidWord:
    """Shift every generator index by `offset` into a wider braid group."""
    if strands is None:
        strands = word.strands + offset
    letters = []
    for e in word.letters:
        i = abs(e) + offset
        if not 1 <= i <= strands - 1:
            raise ValueError(f"shift by {offset} pushes letter {e} out of range")
        letters.append(i if e > 0 else -i)
    return BraidWord(strands, tuple(letters))


def destabilize(word: BraidWord) -> BraidWord:
    """Remove the unique top-generator letter and drop a strand (Markov move)."""
    top = word.strands - 1
    positions = [p for p, e in enumerate(word.letters) if abs(e) == top]
    if len(positions) != 1:
        raise ValueError(
            f"destabilization needs exactly one x_{top} letter, found {len(positions)}"
        )
    letters = word.letters[: positions[0]] + word.letters[positions[0] + 1 :]
    return BraidWord(word.strands - 1, letters)


def concat(first: BraidWord, second: BraidWord) -> BraidWord:
    """Connected-sum word: `second` shifted past `first`, sharing one strand."""
    shifted = shift(second, first.strands - 1, first.strands + second.strands - 1)
    letters = tuple(first.letters) + shifted.letters
    return BraidWord(first.strands + second.strands - 1, letters)


def distant_union(first: BraidWord, second: BraidWord) -> BraidWord:
    """Word whose closure is the split union of the two closures."""
    shifted = shift(second, first.strands, first.strands + second.strands)
    return BraidWord(first.strands + second.strands, tuple(first.letters) + shifted.letters)


def word_transform(word: BraidWord, kind: str, arg=None) -> BraidWord:
    """Dispatch to one of mirror | reverse | shift | destabilize | concat."""
    if kind == "mirror":
        return mirror(word)
    if kind == "reverse":
        return reverse(word)
    if kind == "shift":
        return shift(word, int(arg))
    if kind == "destabilize":
        return destabilize(word)
    if kind == "concat":
        return concat(word, arg)
    raise ValueError(f"unknown transform {kind!r}")


# ---------------------------------------------------------------------------
# Class search
# ---------------------------------------------------------------------------


def _min_rotation(word: Tuple[int, ...]) -> Tuple[int, ...]:
    if not word:
        return word
    best = word
    for k in range(1, len(word)):
        cand = word[k:] + word[:k]
        if cand < best:
            best = cand
    return best


def _split_outcome(word: BraidWord) -> Optional[Splittable]:
    """Split at the first unused generator index, folding empty sides to unknots."""
    n = word.strands
    used = {e for e in word.letters}
    gap = None
    for j in range(1, n):
        if j not in used:
            gap = j
            break
    if gap is None:
        return None
    left_letters = tuple(e for e in word.letters if e < gap)
    right_letters = tuple(e - gap for e in word.letters if e > gap)
    parts: List[BraidWord] = []
    unknots = 0
    for letters, k in ((left_letters, gap), (right_letters, n - gap)):
        if letters:
            parts.append(BraidWord(k, letters))
        else:
            unknots += k
    left = parts[0] if parts else None
    right = parts[1] if len(parts) > 1 else None
    return Splittable(left, right, unknots)


def _word_checks(
    word: Tuple[int, ...], n: int
) -> Optional[RewriteOutcome]:
    """Per-word outcome checks, in priority order destab > square > distinct."""
    length = len(word)
    top = n - 1
    if n >= 2 and word.count(top) == 1:
        pos = word.index(top)
        rotated = word[pos + 1 :] + word[: pos + 1]
        return Destabilizable(BraidWord(n, rotated))
    for p in range(length):
        q = (p + 1) % length
        if q != p and word[p] == word[q]:
            rotated = word[p:] + word[:p]
            return SquareFound(0, BraidWord(n, rotated))
    if len(set(word)) == length:
        return DistinctLetters(BraidWord(n, word))
    return None


def class_search(
    word: BraidWord,
    budget: int = DEFAULT_SEARCH_BUDGET,
    *,
    check_invariants: bool = False,
) -> RewriteOutcome:
    """Breadth-first search of the closure class of a positive word.

    Returns the first applicable outcome with priority
    Splittable > Destabilizable > SquareFound > DistinctLetters; `Exhausted`
    only when the budget is hit.  Splittability is invariant under all three
    move families, so it is decided upfront.
    """
    if not word.is_positive():
        raise ValueError("class_search requires a positive word")
    if not word.letters:
        return DistinctLetters(word)
    split = _split_outcome(word)
    if split is not None:
        return split

    n = word.strands
    expected_components = closure_components(word) if check_invariants else None
    start = _min_rotation(word.letters)
    visited = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        if check_invariants:
            assert closure_components(BraidWord(n, current)) == expected_components
        outcome = _word_checks(current, n)
        if outcome is not None:
            return outcome
        length = len(current)
        for p in range(length):
            q = (p + 1) % length
            a, b = current[p], current[q]
            if abs(a - b) >= 2:
                swapped = list(current)
                swapped[p], swapped[q] = b, a
                _push(tuple(swapped), visited, queue, budget)
            r = (p + 2) % length
            if length >= 3 and r != p:
                c = current[r]
                if a == c and abs(a - b) == 1:
                    rewritten = list(current)
                    rewritten[p], rewritten[q], rewritten[r] = b, a, b
                    _push(tuple(rewritten), visited, queue, budget)
        if len(visited) > budget:
            return Exhausted(len(visited))
    return Exhausted(len(visited))


def _push(candidate, visited, queue, budget):
    key = _min_rotation(candidate)
    if key not in visited and len(visited) <= budget:
        visited.add(key)
        queue.append(key)


def is_simple(
    word: BraidWord, budget: int = DEFAULT_SEARCH_BUDGET
) -> Optional[SimplePartition]:
    """Decide simplicity of a positive word by class search.

    Returns the cycle partition when some class word has all-distinct
    generators, None when a square witness shows the word is not simple, and
    raises SearchBudgetExceeded when the budget runs out undecided.
    """
    if not word.is_positive():
        raise ValueError("is_simple requires a positive word")
    if not word.letters:
        return SimplePartition((), word.strands)
    start = _min_rotation(word.letters)
    visited = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        length = len(current)
        for p in range(length):
            if current[p] == current[(p + 1) % length] and length > 1:
                return None
        if len(set(current)) == length:
            return cycle_partition(word)
        for p in range(length):
            q = (p + 1) % length
            a, b = current[p], current[q]
            if abs(a - b) >= 2:
                swapped = list(current)
                swapped[p], swapped[q] = b, a
                _push(tuple(swapped), visited, queue, budget)
            r = (p + 2) % length
            if length >= 3 and r != p:
                c = current[r]
                if a == c and abs(a - b) == 1:
                    rewritten = list(current)
                    rewritten[p], rewritten[q], rewritten[r] = b, a, b
                    _push(tuple(rewritten), visited, queue, budget)
        if len(visited) > budget:
            raise SearchBudgetExceeded(
                f"simplicity of {word} undecided after {len(visited)} words"
            )
    raise SearchBudgetExceeded(f"simplicity of {word} undecided (class exhausted)")


def build_simple_word(partition: SimplePartition) -> BraidWord:
    """Canonical word of a simple-braid conjugacy class: disjoint ascending runs."""
    letters: List[int] = []
    offset = 0
    for part in partition.parts:
        letters.extend(range(offset + 1, offset + part))
        offset += part
    return BraidWord(partition.strands, tuple(letters))
