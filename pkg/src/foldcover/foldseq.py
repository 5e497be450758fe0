"""Paperfolding sequences: classical unfolding, folding convolution, derivation.

Sequences are tuples of ``+1``/``-1`` turn signs.  Infinite sequences are
exposed through :class:`SequenceGenerator` subclasses, which compute
``term(k)`` lazily for ``k >= 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

Signs = tuple[int, ...]

#: hard cap on materialized prefix length
MAX_TERMS = 1 << 24


class FoldSeqError(ValueError):
    """Malformed input to a folding-sequence operation."""


class InvalidFoldingSequence(FoldSeqError):
    pass


class NotSFolding(FoldSeqError):
    """A window cannot be split into S / reverse_negate(S) blocks."""


class ResourceError(RuntimeError):
    pass


def _check_signs(terms: Sequence[int]) -> Signs:
    out = tuple(int(t) for t in terms)
    for t in out:
        if t not in (1, -1):
            raise FoldSeqError(f"folding terms must be +1 or -1, got {t!r}")
    return out


def parse_signs(text: str) -> Signs:
    """``"+-+"`` -> ``(1, -1, 1)``."""
    out = []
    for ch in text.strip():
        if ch == "+":
            out.append(1)
        elif ch == "-":
            out.append(-1)
        else:
            raise FoldSeqError(f"unexpected character {ch!r} in sign string")
    return tuple(out)


def format_signs(terms: Sequence[int]) -> str:
    return "".join("+" if t > 0 else "-" for t in terms)


def reverse_negate(s: Sequence[int]) -> Signs:
    """The string read backwards with every sign flipped (the bar operation)."""
    return tuple(-t for t in reversed(s))


def unfold(folds: Sequence[int], n: int) -> Signs:
    """Turn sequence of a strip folded ``n`` times with fold directions ``folds``.

    ``S_{j+1} = S_j, f_j, reverse_negate(S_j)``, so ``a_{2^j} = f_j``.
    """
    folds = _check_signs(folds)
    if n < 0 or n > len(folds):
        raise FoldSeqError(f"need {n} fold instructions, have {len(folds)}")
    if (1 << n) - 1 > MAX_TERMS:
        raise ResourceError(f"2^{n}-1 terms exceeds cap {MAX_TERMS}")
    s: Signs = ()
    for j in range(n):
        s = s + (folds[j],) + reverse_negate(s)
    return s


def term_4adic(folds: Sequence[int], k: int) -> int:
    """Closed form of :func:`unfold`: for ``k = m 2^j`` with ``m`` odd,
    ``a_k = f_j`` if ``m = 1 mod 4`` and ``-f_j`` otherwise."""
    if k < 1:
        raise FoldSeqError("index must be >= 1")
    j = (k & -k).bit_length() - 1
    if j >= len(folds):
        raise FoldSeqError(f"index {k} needs fold instruction {j}")
    m = k >> j
    f = folds[j]
    return f if m % 4 == 1 else -f


def convolve(s: Sequence[int], t: Sequence[int]) -> Signs:
    """Folding convolution ``S * T``: copies of ``T`` and ``reverse_negate(T)``
    alternate, separated by the letters of ``S``."""
    s = _check_signs(s)
    t = _check_signs(t)
    tbar = reverse_negate(t)
    out: list[int] = list(t)
    for j, a in enumerate(s):
        out.append(a)
        out.extend(tbar if j % 2 == 0 else t)
    return tuple(out)


def star_power(s: Sequence[int], n: int) -> Signs:
    """``S^{*1} = S`` and ``S^{*(n+1)} = S^{*n} * S``."""
    s = _check_signs(s)
    if n < 1:
        raise FoldSeqError("star power needs n >= 1")
    m = len(s) + 1
    if m ** n - 1 > MAX_TERMS:
        raise ResourceError(f"{m}^{n}-1 terms exceeds cap {MAX_TERMS}")
    out = s
    for _ in range(n - 1):
        out = convolve(out, s)
    return out


def has_odd_alternation(terms: Sequence[int], first_index: int = 1) -> bool:
    """``a_{2j+1} = (-1)^j a_1`` over a window whose first term has index
    ``first_index``.  Only the odd-indexed terms present are compared."""
    odd = [(k, a) for k, a in enumerate(terms, start=first_index) if k % 2]
    if not odd:
        return True
    k0, a0 = odd[0]
    return all(a == a0 * (1 if ((k - k0) // 2) % 2 == 0 else -1) for k, a in odd)


def is_folding_prefix(terms: Sequence[int]) -> bool:
    """True iff ``terms`` is a prefix of some infinite paperfolding sequence.

    For every level j the terms at odd multiples of ``2^j`` alternate in sign.
    """
    n = len(terms)
    j = 0
    while (1 << j) <= n:
        step = 1 << j
        sub = [terms[k - 1] for k in range(step, n + 1, step)]
        if not has_odd_alternation(sub):
            return False
        j += 1
    return True


class SequenceGenerator:
    """Lazily evaluated one-sided sequence ``a_1, a_2, ...``.

    ``length`` is ``None`` for infinite sequences.
    """

    length: int | None = None
    #: segment count merged by one derivation step
    block = 2

    def term(self, k: int) -> int:
        raise NotImplementedError

    def prefix(self, n: int) -> Signs:
        if n > MAX_TERMS:
            raise ResourceError(f"prefix of {n} terms exceeds cap {MAX_TERMS}")
        if self.length is not None and n > self.length:
            raise FoldSeqError(f"sequence has only {self.length} terms")
        return tuple(self.term(k) for k in range(1, n + 1))

    def _bounds(self, k: int) -> None:
        if k < 1 or (self.length is not None and k > self.length):
            raise FoldSeqError(f"index {k} out of range")


@dataclass(frozen=True)
class FiniteString(SequenceGenerator):
    terms: Signs

    def __post_init__(self):
        object.__setattr__(self, "terms", _check_signs(self.terms))

    @property
    def length(self) -> int:  # type: ignore[override]
        return len(self.terms)

    def term(self, k: int) -> int:
        self._bounds(k)
        return self.terms[k - 1]


@dataclass(frozen=True)
class InstructionSequence(SequenceGenerator):
    """Paperfolding sequence generated by fold instructions ``f_0, f_1, ...``.

    With ``period`` set, the instruction list repeats with that period and
    the sequence is infinite; otherwise it has ``2^len(folds) - 1`` terms.
    """

    folds: Signs
    period: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "folds", _check_signs(self.folds))
        if self.period is not None:
            if self.period < 1 or self.period > len(self.folds):
                raise FoldSeqError("period must be within the instruction list")

    @property
    def length(self) -> int | None:  # type: ignore[override]
        if self.period is not None:
            return None
        return (1 << len(self.folds)) - 1

    def fold(self, j: int) -> int:
        n = len(self.folds)
        if j < n:
            return self.folds[j]
        if self.period is None:
            raise FoldSeqError(f"fold instruction {j} not available")
        start = n - self.period
        return self.folds[start + (j - start) % self.period]

    def term(self, k: int) -> int:
        self._bounds(k)
        j = (k & -k).bit_length() - 1
        f = self.fold(j)
        return f if (k >> j) % 4 == 1 else -f

    def shifted(self) -> "InstructionSequence":
        """Instructions ``f_1, f_2, ...`` (the derivative)."""
        if self.period is None:
            if not self.folds:
                raise FoldSeqError("empty instruction list has no derivative")
            return InstructionSequence(self.folds[1:])
        folds = self.folds
        if self.period == len(folds):
            # rotate so the period still covers the whole list
            return InstructionSequence(folds[1:] + folds[:1], self.period)
        return InstructionSequence(folds[1:], self.period)

    def prepended(self, f: int) -> "InstructionSequence":
        return InstructionSequence((f,) + self.folds, self.period)


def dragon(n: int | None = None) -> InstructionSequence:
    """The positive (dragon) folding sequence, all folds ``+1``."""
    return InstructionSequence((1,) * n) if n is not None else InstructionSequence((1,), 1)


def alternating(n: int | None = None) -> InstructionSequence:
    if n is not None:
        return InstructionSequence(tuple((-1) ** j for j in range(n)))
    return InstructionSequence((1, -1), 2)


def example9() -> InstructionSequence:
    """Folds ``+,+,-,-`` repeated: ``a_{2^{4n}} = a_{2^{4n+1}} = +1``,
    ``a_{2^{4n+2}} = a_{2^{4n+3}} = -1``."""
    return InstructionSequence((1, 1, -1, -1), 4)


@dataclass(frozen=True)
class StarSequence(SequenceGenerator):
    """``S^{*infinity}`` for a folding string ``S`` of length ``m - 1``."""

    base: Signs

    def __post_init__(self):
        object.__setattr__(self, "base", _check_signs(self.base))
        if not self.base:
            raise FoldSeqError("star base must be nonempty")

    @property
    def block(self) -> int:  # type: ignore[override]
        return len(self.base) + 1

    def term(self, k: int) -> int:
        self._bounds(k)
        m = len(self.base) + 1
        while k % m == 0:
            k //= m
        q, r = divmod(k, m)
        return self.base[r - 1] if q % 2 == 0 else -self.base[m - r - 1]


@dataclass(frozen=True)
class LazySequence(SequenceGenerator):
    func: Callable[[int], int]
    name: str = "lazy"

    def term(self, k: int) -> int:
        self._bounds(k)
        return self.func(k)


def derive_seq(s: SequenceGenerator, check: int = 256) -> SequenceGenerator:
    """``b_k = a_{2k}``.

    The first ``check`` odd-indexed terms are tested for sign alternation
    (the condition for ``s`` to be a folding sequence).
    """
    n = check if s.length is None else min(check, s.length)
    if not has_odd_alternation(s.prefix(n)):
        raise InvalidFoldingSequence("odd-indexed terms do not alternate")
    if isinstance(s, InstructionSequence):
        return s.shifted()
    if s.length is not None:
        return FiniteString(tuple(s.term(2 * k) for k in range(1, s.length // 2 + 1)))
    return LazySequence(lambda k, _s=s: _s.term(2 * k), name="derived")


def primitive_seq(s: SequenceGenerator, phase: int) -> SequenceGenerator:
    """Antiderivative: ``b_{2k} = a_k`` and ``b_{2k-1} = phase (-1)^(k-1)``."""
    if phase not in (1, -1):
        raise FoldSeqError("phase must be +1 or -1")
    if isinstance(s, InstructionSequence):
        return s.prepended(phase)

    def f(k: int, _s=s) -> int:
        if k % 2 == 0:
            return _s.term(k // 2)
        j = (k + 1) // 2
        return phase if j % 2 == 1 else -phase

    if s.length is not None:
        n = 2 * s.length + 1
        return FiniteString(tuple(f(k) for k in range(1, n + 1)))
    return LazySequence(f, name="primitive")


def derive_dekking(window: Sequence[int], s: Sequence[int]) -> tuple[Signs, int]:
    """Split ``window`` into alternating ``S`` / ``reverse_negate(S)`` blocks
    separated by single signs; return ``(separators, offset)``.

    ``offset`` is the 0-based position of the first separator, in ``[0, m)``.
    Partial blocks at either end must agree with the matching suffix/prefix.
    """
    s = _check_signs(s)
    w = _check_signs(window)
    m = len(s) + 1
    if len(w) < 2 * m:
        raise FoldSeqError(f"window of length {len(w)} shorter than 2m={2 * m}")
    sbar = reverse_negate(s)
    for r in range(m):
        seps = tuple(w[r::m])
        # blocks: w[:r] is the tail of a block, then full blocks between separators
        starts = [-(m - 1 - r)] + [p + 1 for p in range(r, len(w), m)]
        for first in (s, sbar):
            ok = True
            cur, other = first, (sbar if first is s else s)
            for b in starts:
                lo, hi = b, b + m - 1
                for pos in range(max(lo, 0), min(hi, len(w))):
                    if w[pos] != cur[pos - lo]:
                        ok = False
                        break
                if not ok:
                    break
                cur, other = other, cur
            if ok:
                return seps, r
    raise NotSFolding("no alignment splits the window into S / S-bar blocks")


def is_s_folding_word(window: Sequence[int], s: Sequence[int]) -> bool:
    """True iff ``window`` splits into ``S`` / ``S-bar`` blocks at every
    derivation level until fewer than ``2m`` terms remain."""
    w = _check_signs(window)
    m = len(_check_signs(s)) + 1
    while len(w) >= 2 * m:
        try:
            w, _ = derive_dekking(w, s)
        except NotSFolding:
            return False
    return True


@dataclass(frozen=True)
class CompleteSequence:
    """Bi-infinite ``(reverse_negate(S), center, S)``."""

    positive: SequenceGenerator
    center: int

    def __post_init__(self):
        if self.center not in (1, -1):
            raise FoldSeqError("center sign must be +1 or -1")

    def term(self, k: int) -> int:
        if k == 0:
            return self.center
        if k > 0:
            return self.positive.term(k)
        return -self.positive.term(-k)

    def window(self, lo: int, hi: int) -> Signs:
        """Terms ``lo .. hi`` inclusive."""
        return tuple(self.term(k) for k in range(lo, hi + 1))


def complete_seq(s: SequenceGenerator, sign: int) -> CompleteSequence:
    return CompleteSequence(s, sign)


# -- text format ------------------------------------------------------------

def dump_sequence(gen: SequenceGenerator) -> str:
    if isinstance(gen, InstructionSequence):
        payload = format_signs(gen.folds)
        if gen.period is not None:
            payload += f" period={gen.period}"
        kind = "instructions"
    elif isinstance(gen, StarSequence):
        kind, payload = "star", format_signs(gen.base)
    elif isinstance(gen, FiniteString):
        kind, payload = "string", format_signs(gen.terms)
    else:
        raise FoldSeqError(f"cannot serialize {type(gen).__name__}")
    return f"foldseq v1\nkind={kind}\n{payload}\n"


def parse_sequence(text: str) -> SequenceGenerator:
    lines = text.splitlines()
    if len(lines) < 3 or lines[0].strip() != "foldseq v1":
        raise FoldSeqError("missing 'foldseq v1' header")
    kind_line = lines[1].strip()
    if not kind_line.startswith("kind="):
        raise FoldSeqError("second line must be kind=...")
    kind = kind_line[5:]
    payload = lines[2].strip()
    if any(line.strip() for line in lines[3:]):
        raise FoldSeqError("trailing content after payload")
    if kind == "string":
        return FiniteString(parse_signs(payload))
    if kind == "star":
        return StarSequence(parse_signs(payload))
    if kind == "instructions":
        parts = payload.split()
        if not parts or len(parts) > 2:
            raise FoldSeqError("bad instructions payload")
        period = None
        if len(parts) == 2:
            if not parts[1].startswith("period="):
                raise FoldSeqError("expected period=<p>")
            try:
                period = int(parts[1][7:])
            except ValueError as exc:
                raise FoldSeqError("period must be an integer") from exc
        return InstructionSequence(parse_signs(parts[0]), period)
    raise FoldSeqError(f"unknown kind {kind!r}")
