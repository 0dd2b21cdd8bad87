"""
Exhaustive Barker sequence search.

Candidates are filled from both ends at once: after the j outermost pairs
(x_1..x_j and x_{n-j+1}..x_n) are placed, c_{n-j} is fully determined and
a branch with |c_{n-j}| > 1 is cut. Completed candidates are confirmed with
the bit-parallel kernel. ``naive_barker_filter`` checks all 2^n words with
the numpy kernel and serves as the exhaustiveness oracle for small n.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Set, Tuple

import numpy as np

from .errors import CapacityError, DomainError
from .seqcore import (
    MINUS,
    PLUS,
    BinarySequence,
    batch_autocorrelation,
    format_sequence,
    is_barker,
    lexicographic_key,
    require_int,
    unpack_word,
)
from .turynstorer import k_max, satisfies_eq_k

# Configuration constants
MIN_BARKER_LENGTH = 2
MAX_BARKER_LENGTH = 32
MAX_NAIVE_LENGTH = 20
SPLIT_PAIRS = 2
LAST_KNOWN_ODD_LENGTH = 13


@dataclass(frozen=True)
class BarkerSearchResult:
    """All Barker sequences of one length, in lexicographic order."""

    n: int
    sequences: Tuple[BinarySequence, ...]
    elapsed: float = 0.0

    @property
    def count(self) -> int:
        return len(self.sequences)


def _check_length(n, bound: int) -> int:
    n = require_int(n, "Length n")
    if n < MIN_BARKER_LENGTH:
        raise DomainError(f"Barker lengths start at {MIN_BARKER_LENGTH}, got n={n}")
    if n > bound:
        raise CapacityError(f"n={n} is above the search bound of {bound}")
    return n


def _edge_correlation(arr: List[int], n: int, m: int) -> int:
    """c_{n-m}, which only reads the m outermost elements on each side."""
    return sum(arr[i] * arr[n - m + i] for i in range(m))


def _pairs(arr: List[int], n: int, j: int, stop: int) -> Iterator[List[int]]:
    """Place end pairs j..stop-1 in every way that keeps each edge
    correlation within ±1; yields a copy per surviving assignment."""
    if j == stop:
        yield list(arr)
        return
    for left in (PLUS, MINUS):
        for right in (PLUS, MINUS):
            arr[j], arr[n - 1 - j] = left, right
            if abs(_edge_correlation(arr, n, j + 1)) <= 1:
                yield from _pairs(arr, n, j + 1, stop)
    arr[j] = arr[n - 1 - j] = 0


def _barker_subtree(task) -> List[BinarySequence]:
    arr, n, start = task
    middles = (PLUS, MINUS) if n % 2 else (None,)
    found = []
    for filled in _pairs(list(arr), n, start, n // 2):
        for middle in middles:
            if middle is not None:
                filled[n // 2] = middle
            x = BinarySequence(filled)
            if is_barker(x):
                found.append(x)
    return found


def barker_search(n: int, thread_count: Optional[int] = None) -> BarkerSearchResult:
    """
    Every Barker sequence of length n.

    Args:
        n: Length, 2 <= n <= MAX_BARKER_LENGTH.
        thread_count: Worker processes; subtrees below the first
            ``SPLIT_PAIRS`` end pairs are shared out when above 1.

    Returns:
        Result with the sequences sorted +1 before -1.

    Raises:
        DomainError: If n < 2.
        CapacityError: If n > MAX_BARKER_LENGTH.
    """
    n = _check_length(n, MAX_BARKER_LENGTH)
    workers = 1 if thread_count is None else require_int(thread_count, "thread_count")
    if workers < 1:
        raise DomainError(f"thread_count must be positive, got {workers}")

    started = time.perf_counter()
    empty = [0] * n
    if workers == 1 or n // 2 <= SPLIT_PAIRS:
        found = _barker_subtree((empty, n, 0))
    else:
        tasks = [(stub, n, SPLIT_PAIRS) for stub in _pairs(list(empty), n, 0, SPLIT_PAIRS)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            found = [x for chunk in pool.map(_barker_subtree, tasks) for x in chunk]

    return BarkerSearchResult(
        n=n,
        sequences=tuple(sorted(found, key=lexicographic_key)),
        elapsed=time.perf_counter() - started,
    )


def naive_barker_filter(n: int) -> List[BinarySequence]:
    """
    Filter all 2^n sequences through |c_k| <= 1 with the vectorised kernel.

    Raises:
        DomainError: If n < 2.
        CapacityError: If n > MAX_NAIVE_LENGTH.
    """
    n = _check_length(n, MAX_NAIVE_LENGTH)
    words = np.arange(1 << n, dtype=np.uint64)
    keep = np.ones(words.shape, dtype=bool)
    for k in range(1, n):
        keep &= np.abs(batch_autocorrelation(words, n, k)) <= 1
    survivors = [unpack_word(int(w), n) for w in words[keep]]
    return sorted(survivors, key=lexicographic_key)


def odd_nonexistence_scan(n_max: int, thread_count: Optional[int] = None) -> List[Tuple[int, int]]:
    """
    Barker counts for every odd n with 13 < n <= n_max.

    Every count comes from ``barker_search``; a nonzero one is reported as
    it is (see ``scan_anomalies``), never suppressed.

    Raises:
        CapacityError: If n_max > MAX_BARKER_LENGTH.
    """
    n_max = require_int(n_max, "n_max")
    if n_max > MAX_BARKER_LENGTH:
        raise CapacityError(f"n_max={n_max} is above the search bound of {MAX_BARKER_LENGTH}")
    return [(n, barker_search(n, thread_count).count)
            for n in range(LAST_KNOWN_ODD_LENGTH + 2, n_max + 1, 2)]


def scan_anomalies(entries: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Entries with a nonzero count: odd-length Barker sequences beyond 13."""
    return [(n, count) for n, count in entries if count]


def eq_k_profile(x: BinarySequence) -> Set[int]:
    """
    The k in 1..k_max(n) for which x satisfies equation (k).

    Raises:
        DomainError: If n < 3.
    """
    if not isinstance(x, BinarySequence):
        raise TypeError("eq_k_profile expects a BinarySequence")
    if x.n < 3:
        raise DomainError(f"Equation (k) profiles need n >= 3, got n={x.n}")
    return {k for k in range(1, k_max(x.n) + 1) if satisfies_eq_k(x, k)}


def result_to_dict(result: BarkerSearchResult) -> Dict:
    """JSON-ready form; elapsed time is left out so output is reproducible."""
    return {
        'n': result.n,
        'count': result.count,
        'sequences': [format_sequence(x) for x in result.sequences],
    }
