"""De Bruijn words and factor lookup.

A ``(k, n)`` word here has length exactly ``k**n`` over ``{1..k}`` and every
length-``n`` word occurs at most once as a linear factor. It is read off an
Eulerian circuit of the order ``n-1`` de Bruijn graph, always leaving a node
by its lexicographically least unused edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from locert.errors import CapacityError

MAX_WORD_LENGTH = 1 << 20


@dataclass(frozen=True)
class Word:
    alphabet_size: int
    letters: tuple
    order: int
    de_bruijn_prefix: bool = False
    _index: dict = field(default=None, compare=False, repr=False, hash=False)

    def __post_init__(self):
        letters = tuple(int(x) for x in self.letters)
        if any(not 1 <= x <= self.alphabet_size for x in letters):
            raise ValueError(f"letters must lie in 1..{self.alphabet_size}")
        object.__setattr__(self, "letters", letters)
        index = {}
        n = self.order
        for p in range(len(letters) - n + 1):
            f = letters[p:p + n]
            if f in index and self.de_bruijn_prefix:
                raise ValueError(f"factor {f} repeats in a word flagged as de Bruijn")
            index.setdefault(f, p + 1)
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.letters)

    def __getitem__(self, i: int) -> int:
        """1-based letter access, ``w[1]`` is the first letter."""
        if not 1 <= i <= len(self.letters):
            raise IndexError(i)
        return self.letters[i - 1]

    def __str__(self) -> str:
        return "".join(str(x) if self.alphabet_size < 10 else f"{x}," for x in self.letters)

    def has_factor(self, f) -> bool:
        f = tuple(f)
        if len(f) == self.order:
            return f in self._index
        m = len(f)
        return any(self.letters[p:p + m] == f for p in range(len(self.letters) - m + 1))


def de_bruijn_word(k: int, n: int, cap: int = MAX_WORD_LENGTH) -> Word:
    if k < 1 or n < 1:
        raise ValueError("need k >= 1 and n >= 1")
    length = k ** n
    if length > cap:
        raise CapacityError(f"de Bruijn word of length {length} exceeds cap {cap}")
    if n == 1:
        return Word(k, tuple(range(1, k + 1)), n, True)
    # nodes: (n-1)-tuples; each node has k outgoing edges labelled 1..k.
    # Hierholzer with an explicit stack; next_edge[node] is the least unused label.
    start = (1,) * (n - 1)
    next_edge = {}
    stack = [(start, None)]
    circuit = []
    while stack:
        node, label = stack[-1]
        nxt = next_edge.get(node, 1)
        if nxt <= k:
            next_edge[node] = nxt + 1
            stack.append((node[1:] + (nxt,), nxt))
        else:
            stack.pop()
            if label is not None:
                circuit.append(label)
    circuit.reverse()
    assert len(circuit) == length
    return Word(k, tuple(circuit), n, True)


def prefix(w: Word, t: int) -> Word:
    if t > len(w):
        raise ValueError(f"prefix length {t} exceeds word length {len(w)}")
    if t < 0:
        raise ValueError("prefix length must be non-negative")
    return Word(w.alphabet_size, w.letters[:t], w.order, w.de_bruijn_prefix)


def locate_factor(w: Word, f):
    """1-based start of the unique occurrence of ``f`` in ``w``, or ``None``."""
    f = tuple(f)
    if len(f) != w.order:
        raise ValueError(f"factor length {len(f)} differs from word order {w.order}")
    return w._index.get(f)


def integer_root_ceil(t: int, e: int) -> int:
    """Least integer ``x >= 1`` with ``x**e >= t``."""
    if t <= 1:
        return 1
    x = max(1, round(t ** (1.0 / e)))
    while x ** e < t:
        x += 1
    while x > 1 and (x - 1) ** e >= t:
        x -= 1
    return x


def scheme_word(t: int, order: int) -> Word:
    """Length-``t`` prefix of the ``(ceil(t**(1/order)), order)`` de Bruijn word."""
    tau = integer_root_ceil(t, order)
    return prefix(de_bruijn_word(tau, order), t)
