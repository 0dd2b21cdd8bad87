"""
Binary sequence core: ±1 sequences, run length encodings and aperiodic
autocorrelation.

A binary sequence x = (x_1, ..., x_n) holds values in {+1, -1}. Every public
function here uses 1-based positions the way the formulas are written;
``BinarySequence.at`` is the one place where a 1-based position is turned
into an index into the 0-based tuple that stores the elements.

Two correlation kernels are provided: a direct sum, and a bit-parallel
kernel where the sequence is packed into an integer word (+1 -> bit 0,
-1 -> bit 1) so that c_k = (n - k) - 2 * popcount(w ^ (w >> k)) over the
low n - k bits. ``batch_autocorrelation`` applies the same identity to a
numpy array of words at once.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .errors import DomainError, SequenceFormatError

# Configuration constants
PLUS = 1
MINUS = -1
MAX_WORD_LENGTH = 64

SIGN_CHARS = {'+': PLUS, '-': MINUS, '−': MINUS}

# Bit counts of every byte value; indexing with a uint8 view of a uint64
# array counts each word eight bytes at a time.
_POPCOUNT8 = np.array([bin(v).count("1") for v in range(256)], dtype=np.uint8)


def require_int(value, name: str) -> int:
    """Reject bools and non-integers the way the rest of the API does."""
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    return int(value)


def require_sign(value, name: str) -> int:
    value = require_int(value, name)
    if value not in (PLUS, MINUS):
        raise SequenceFormatError(f"{name} must be +1 or -1, got {value}")
    return value


@dataclass(frozen=True)
class BinarySequence:
    """
    Immutable sequence of signs x_1 ... x_n with every x_i in {+1, -1}.

    Build one from any iterable of ±1 integers; the elements are stored as
    a tuple so instances are hashable and safe to share between workers.
    """

    elements: Tuple[int, ...]

    def __post_init__(self):
        if isinstance(self.elements, str):
            raise TypeError("Use parse_sequence() to build a sequence from text")
        values = tuple(self.elements)
        if not values:
            raise SequenceFormatError("A binary sequence needs at least one element")
        checked = tuple(require_sign(v, f"Element {i + 1}") for i, v in enumerate(values))
        object.__setattr__(self, 'elements', checked)

    @property
    def n(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __str__(self) -> str:
        return format_sequence(self)

    def at(self, i: int) -> int:
        """
        Return x_i using 1-based indexing.

        Raises:
            DomainError: If i is outside 1..n.
        """
        i = require_int(i, "Position")
        if not 1 <= i <= self.n:
            raise DomainError(f"Position {i} is outside 1..{self.n}")
        return self.elements[i - 1]

    @cached_property
    def word(self) -> int:
        """Packed form: bit i-1 is set exactly when x_i = -1."""
        w = 0
        for i, v in enumerate(self.elements):
            if v == MINUS:
                w |= 1 << i
        return w

    def prefix(self, m: int) -> "BinarySequence":
        """Return (x_1, ..., x_m)."""
        m = require_int(m, "Prefix length")
        if not 1 <= m <= self.n:
            raise DomainError(f"Prefix length {m} is outside 1..{self.n}")
        return BinarySequence(self.elements[:m])

    def padded(self, n: int, sign: int = PLUS) -> "BinarySequence":
        """
        Extend the sequence to length n by repeating ``sign``.

        A sequence that is already n long is returned unchanged.

        Raises:
            DomainError: If n is shorter than the sequence.
        """
        n = require_int(n, "Padded length")
        sign = require_sign(sign, "Padding sign")
        if n < self.n:
            raise DomainError(f"Cannot pad a length-{self.n} sequence down to {n}")
        if n == self.n:
            return self
        return BinarySequence(self.elements + (sign,) * (n - self.n))

    def negated(self) -> "BinarySequence":
        return BinarySequence(-v for v in self.elements)

    def reversed(self) -> "BinarySequence":
        return BinarySequence(self.elements[::-1])

    def alternated(self) -> "BinarySequence":
        """Apply x_i -> (-1)^i x_i (so x_1 flips, x_2 stays, ...)."""
        return BinarySequence(v if i % 2 == 0 else -v
                              for i, v in enumerate(self.elements, start=1))


@dataclass(frozen=True)
class RunLengthEncoding:
    """Leading sign plus the lengths of the maximal constant runs."""

    leading_sign: int
    runs: Tuple[int, ...]

    def __post_init__(self):
        sign = require_sign(self.leading_sign, "Leading sign")
        if isinstance(self.runs, (str, bytes)):
            raise TypeError("Use parse_rle() to build an encoding from text")
        runs = tuple(self.runs)
        if not runs:
            raise SequenceFormatError("A run length encoding needs at least one run")
        checked = []
        for i, run in enumerate(runs, start=1):
            run = require_int(run, f"Run {i}")
            if run < 1:
                raise SequenceFormatError(f"Run {i} has length {run}; run lengths must be positive")
            checked.append(run)
        object.__setattr__(self, 'leading_sign', sign)
        object.__setattr__(self, 'runs', tuple(checked))

    @property
    def length(self) -> int:
        """Number of elements the encoding decodes to."""
        return sum(self.runs)

    def __str__(self) -> str:
        return format_rle(self)


def lexicographic_key(x: BinarySequence) -> Tuple[int, ...]:
    """Sort key ordering +1 before -1 position by position."""
    return tuple(0 if v == PLUS else 1 for v in x.elements)


def parse_sequence(text: str) -> BinarySequence:
    """
    Parse a sequence literal such as ``"+++---++"``.

    Args:
        text: String over '+' and '-' (the Unicode minus sign is accepted
            as '-'). Surrounding whitespace is ignored.

    Returns:
        The parsed sequence.

    Raises:
        TypeError: If text is not a string.
        SequenceFormatError: If text is empty or holds any other character;
            the message names the character and its 1-based position.
    """
    if not isinstance(text, str):
        raise TypeError("Sequence literal must be a string")

    body = text.strip()
    if not body:
        raise SequenceFormatError("Sequence literal is empty")

    values = []
    for position, char in enumerate(body, start=1):
        if char not in SIGN_CHARS:
            raise SequenceFormatError(
                f"Unexpected character {char!r} at position {position} of sequence literal"
            )
        values.append(SIGN_CHARS[char])
    return BinarySequence(values)


def format_sequence(x: BinarySequence) -> str:
    return ''.join('+' if v == PLUS else '-' for v in x.elements)


def parse_rle(text: str, default_sign: Optional[int] = None) -> RunLengthEncoding:
    """
    Parse RLE text such as ``"+3,3,6,3,2,2"`` or ``"(3,3,6,3,2,2)"``.

    The leading sign character is optional only when ``default_sign`` is
    given; library callers normally pass None so the sign is always explicit.

    Args:
        text: Optional '+'/'-' followed by comma-separated positive integers,
            optionally wrapped in parentheses.
        default_sign: Sign used when text carries none.

    Returns:
        The parsed encoding.

    Raises:
        TypeError: If text is not a string.
        SequenceFormatError: On a missing sign, a non-numeric token or a
            non-positive run; the message names the token and its position.
    """
    if not isinstance(text, str):
        raise TypeError("RLE text must be a string")

    body = text.strip()
    if body.startswith('(') and body.endswith(')'):
        body = body[1:-1].strip()
    if not body:
        raise SequenceFormatError("RLE text is empty")

    if body[0] in SIGN_CHARS:
        sign = SIGN_CHARS[body[0]]
        body = body[1:]
    elif default_sign is None:
        raise SequenceFormatError(
            f"RLE text must start with '+' or '-', found {body[0]!r} at position 1"
        )
    else:
        sign = require_sign(default_sign, "Default sign")

    runs = []
    for position, token in enumerate(body.split(','), start=1):
        token = token.strip()
        if not (token.isascii() and token.isdigit()):
            raise SequenceFormatError(f"Run {position} is not a positive integer: {token!r}")
        value = int(token)
        if value < 1:
            raise SequenceFormatError(
                f"Run {position} has length {value}; run lengths must be positive"
            )
        runs.append(value)
    return RunLengthEncoding(sign, tuple(runs))


def format_rle(rle: RunLengthEncoding) -> str:
    sign = '+' if rle.leading_sign == PLUS else '-'
    return sign + ','.join(str(run) for run in rle.runs)


def rle_decode(rle: RunLengthEncoding) -> BinarySequence:
    """
    Expand an encoding: the first run carries the leading sign and each
    following run flips it.

    Raises:
        TypeError: If rle is not a RunLengthEncoding.
    """
    if not isinstance(rle, RunLengthEncoding):
        raise TypeError("rle_decode expects a RunLengthEncoding")

    values: List[int] = []
    sign = rle.leading_sign
    for run in rle.runs:
        values.extend([sign] * run)
        sign = -sign
    return BinarySequence(values)


def rle_encode(x: BinarySequence) -> RunLengthEncoding:
    """Encode x as its leading sign and maximal run lengths."""
    if not isinstance(x, BinarySequence):
        raise TypeError("rle_encode expects a BinarySequence")

    runs = []
    current, length = x.elements[0], 0
    for v in x.elements:
        if v == current:
            length += 1
        else:
            runs.append(length)
            current, length = v, 1
    runs.append(length)
    return RunLengthEncoding(x.elements[0], tuple(runs))


def _check_lag(x: BinarySequence, k) -> int:
    if not isinstance(x, BinarySequence):
        raise TypeError("Expected a BinarySequence")
    k = require_int(k, "Shift k")
    if not 0 <= k <= x.n - 1:
        raise DomainError(f"Shift k={k} is outside 0..{x.n - 1} for n={x.n}")
    return k


def autocorrelation(x: BinarySequence, k: int) -> int:
    """
    Aperiodic autocorrelation c_k = sum_{i=1}^{n-k} x_i x_{i+k}, summed
    term by term.

    Raises:
        DomainError: If k is outside 0..n-1.
    """
    k = _check_lag(x, k)
    e = x.elements
    return sum(e[i] * e[i + k] for i in range(x.n - k))


def autocorrelation_bits(x: BinarySequence, k: int) -> int:
    """
    Same value as ``autocorrelation`` computed on the packed word.

    Raises:
        DomainError: If k is outside 0..n-1.
    """
    k = _check_lag(x, k)
    overlap = x.n - k
    mask = (1 << overlap) - 1
    return overlap - 2 * ((x.word ^ (x.word >> k)) & mask).bit_count()


def autocorrelations(x: BinarySequence) -> List[int]:
    """Return [c_0, c_1, ..., c_{n-1}]."""
    return [autocorrelation_bits(x, k) for k in range(x.n)]


def peak_sidelobe(x: BinarySequence) -> int:
    """Largest |c_k| over 1 <= k <= n-1 (0 for a single element)."""
    return max((abs(c) for c in autocorrelations(x)[1:]), default=0)


def is_barker(x: BinarySequence) -> bool:
    """
    True iff |c_k| <= 1 for every 1 <= k <= n-1.

    Raises:
        DomainError: If n < 2; a single element has no off-peak shifts.
    """
    if not isinstance(x, BinarySequence):
        raise TypeError("is_barker expects a BinarySequence")
    if x.n < 2:
        raise DomainError("The Barker property needs n >= 2")
    return all(abs(autocorrelation_bits(x, k)) <= 1 for k in range(1, x.n))


def pack_word(x: BinarySequence) -> int:
    return x.word


def unpack_word(word: int, n: int) -> BinarySequence:
    """Inverse of ``pack_word`` for a sequence of length n."""
    word = require_int(word, "Word")
    n = require_int(n, "Length")
    if n < 1:
        raise DomainError("Length must be at least 1")
    if word < 0 or word >> n:
        raise DomainError(f"Word {word} does not fit in {n} bits")
    return BinarySequence(MINUS if (word >> i) & 1 else PLUS for i in range(n))


def words_from_sequences(sequences: Iterable[BinarySequence]) -> np.ndarray:
    """Pack sequences (each at most 64 long) into a uint64 array."""
    words = []
    for x in sequences:
        if x.n > MAX_WORD_LENGTH:
            raise DomainError(f"Sequences longer than {MAX_WORD_LENGTH} do not fit in one word")
        words.append(x.word)
    return np.array(words, dtype=np.uint64)


def popcount64(words: np.ndarray) -> np.ndarray:
    """Bit count of every element of a uint64 array, as int64."""
    words = np.ascontiguousarray(words, dtype=np.uint64)
    per_byte = _POPCOUNT8[words.view(np.uint8)]
    return per_byte.reshape(words.shape + (8,)).sum(axis=-1, dtype=np.int64)


def batch_autocorrelation(words: np.ndarray, n: int, k: int) -> np.ndarray:
    """
    c_k for many packed sequences of the same length n at once.

    Args:
        words: uint64 array of packed sequences (see ``pack_word``).
        n: Common sequence length, 1..64.
        k: Shift, 0..n-1.

    Returns:
        int64 array of c_k values, one per word.

    Raises:
        DomainError: If n or k is out of range.
    """
    n = require_int(n, "Length")
    k = require_int(k, "Shift k")
    if not 1 <= n <= MAX_WORD_LENGTH:
        raise DomainError(f"Batch kernel handles 1 <= n <= {MAX_WORD_LENGTH}, got n={n}")
    if not 0 <= k <= n - 1:
        raise DomainError(f"Shift k={k} is outside 0..{n - 1} for n={n}")

    words = np.asarray(words, dtype=np.uint64)
    overlap = n - k
    mask = np.uint64((1 << overlap) - 1)
    differing = np.bitwise_and(np.bitwise_xor(words, np.right_shift(words, np.uint64(k))), mask)
    return overlap - 2 * popcount64(differing)
