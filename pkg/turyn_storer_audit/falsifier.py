"""
Counterexamples to Theorem 1 (iv): the published catalog, the
(p, p, 2p, p, p-1, p-1) family and an exhaustive pruned search.

Counterexamples are stored as prefixes of length 2t+1 given by their run
length encoding; every audit pads them with ``turynstorer.pad_for_audit``.

The search walks prefixes depth first with +1 tried before -1, so results
come out in lexicographic order. Equation (k) reads only x_1..x_{2k+1},
so it is checked as soon as position 2k+1 is placed and a failing branch
is cut there.
"""

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .errors import CapacityError, DomainError, FalsificationError, RecordMismatchError
from .seqcore import (
    MINUS,
    PLUS,
    BinarySequence,
    RunLengthEncoding,
    format_rle,
    format_sequence,
    parse_rle,
    parse_sequence,
    require_int,
    rle_decode,
    rle_encode,
)
from .turynstorer import (
    Theorem1Report,
    check_claim_iv,
    derived_sequence,
    pad_for_audit,
    theorem1_audit,
)

# Configuration constants
SPLIT_DEPTH = 6
MAX_NAIVE_LENGTH = 17

CATALOG_SOURCE = "catalog"
FAMILY_SOURCE = "family"
SEARCH_SOURCE = "search"
RECORD_SOURCES = (CATALOG_SOURCE, FAMILY_SOURCE, SEARCH_SOURCE)

# (rle, t, p, failing k) of the four published counterexamples
PUBLISHED_COUNTEREXAMPLES = [
    ("+3,3,6,3,2,2", 9, 3, (3,)),
    ("+5,5,10,5,4,4", 16, 5, (3,)),
    ("+5,5,5,5,10,10,9,4", 26, 5, (5,)),
    ("+5,5,10,5,15,5,4,1,3", 26, 5, (5,)),
]

# Every family member has this z prefix, which breaks equation (3)
FAMILY_Z_PREFIX = BinarySequence((PLUS, MINUS, PLUS, PLUS, MINUS, PLUS, MINUS))

TABLE_HEADER = "# rle\tt\tp\tfailing_k\tsource"


@dataclass(frozen=True)
class CounterexampleRecord:
    """
    A (2t+1)-element prefix that meets the premise of Theorem 1 while its
    derived sequence z breaks equation (k) for every k in ``failing_k``.

    ``claim_*_ok`` carry the verdicts of claims (i)-(iii) from the audit
    that produced the record; None means they were not recorded.
    """

    rle: RunLengthEncoding
    t: int
    p: int
    z_prefix: BinarySequence
    failing_k: Tuple[int, ...]
    source: str
    claim_i_ok: Optional[bool] = None
    claim_ii_ok: Optional[bool] = None
    claim_iii_ok: Optional[bool] = None

    def __post_init__(self):
        if not isinstance(self.rle, RunLengthEncoding):
            raise TypeError("rle must be a RunLengthEncoding")
        t = require_int(self.t, "t")
        p = require_int(self.p, "p")
        if t < 1 or p < 2:
            raise DomainError(f"Records need t >= 1 and p >= 2, got t={t}, p={p}")
        if self.rle.length != 2 * t + 1:
            raise DomainError(
                f"Prefix has {self.rle.length} elements, expected 2t+1 = {2 * t + 1}"
            )
        failing = tuple(sorted(require_int(k, "failing k") for k in self.failing_k))
        if not failing:
            raise DomainError("A counterexample needs at least one failing k")
        if failing[0] < 1 or failing[-1] > t // p:
            raise DomainError(f"failing_k {failing} outside 1..{t // p}")
        if self.source not in RECORD_SOURCES:
            raise ValueError(f"Unknown record source: {self.source!r}")
        object.__setattr__(self, 't', t)
        object.__setattr__(self, 'p', p)
        object.__setattr__(self, 'failing_k', failing)

    @property
    def prefix(self) -> BinarySequence:
        return rle_decode(self.rle)


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one exhaustive counterexample search."""

    p: int
    t: int
    require_premise: bool = True
    max_results: Optional[int] = None
    thread_count: Optional[int] = None

    def __post_init__(self):
        p = require_int(self.p, "p")
        t = require_int(self.t, "t")
        if p < 3:
            raise DomainError(f"Search needs p >= 3, got p={p}")
        if t < 1:
            raise DomainError(f"Search needs t >= 1, got t={t}")
        if self.require_premise is not True:
            raise ValueError("Only premise-restricted searches are supported")
        for name in ('max_results', 'thread_count'):
            value = getattr(self, name)
            if value is not None and require_int(value, name) < 1:
                raise DomainError(f"{name} must be positive, got {value}")


def _record(prefix: BinarySequence, t: int, report: Theorem1Report, source: str) -> CounterexampleRecord:
    return CounterexampleRecord(
        rle=rle_encode(prefix),
        t=t,
        p=report.p,
        z_prefix=derived_sequence(prefix, report.p),
        failing_k=report.failing_iv_k,
        source=source,
        claim_i_ok=report.claim_i_ok,
        claim_ii_ok=report.claim_ii_ok,
        claim_iii_ok=report.claim_iii_ok,
    )


def record_from_prefix(prefix: BinarySequence, t: int, source: str) -> CounterexampleRecord:
    """
    Audit a (2t+1)-element prefix and wrap it as a counterexample record.

    Raises:
        FalsificationError: If the premise fails or claim (iv) holds.
    """
    if not isinstance(prefix, BinarySequence):
        raise TypeError("prefix must be a BinarySequence")
    report = theorem1_audit(pad_for_audit(prefix, t), t)
    if not report.premise_ok:
        raise FalsificationError(
            f"{format_rle(rle_encode(prefix))} does not meet the premise at t={t}: "
            + "; ".join(report.premise_failures)
        )
    if report.claim_iv_ok:
        raise FalsificationError(
            f"Claim (iv) holds for {format_rle(rle_encode(prefix))} at t={t}"
        )
    return _record(prefix, t, report, source)


def published_catalog() -> List[CounterexampleRecord]:
    """
    The four published counterexamples, each re-audited.

    Returns:
        Records with (t, p, failing_k) = (9, 3, {3}), (16, 5, {3}),
        (26, 5, {5}) and (26, 5, {5}).

    Raises:
        FalsificationError: If an entry does not audit as listed.
    """
    records = []
    for text, t, p, expected in PUBLISHED_COUNTEREXAMPLES:
        record = record_from_prefix(rle_decode(parse_rle(text)), t, CATALOG_SOURCE)
        if record.p != p or record.failing_k != expected:
            raise FalsificationError(
                f"{text}: expected p={p}, failing_k={list(expected)}; "
                f"observed p={record.p}, failing_k={list(record.failing_k)}"
            )
        records.append(record)
    return records


def family_rle(p: int) -> RunLengthEncoding:
    """Encoding (p, p, 2p, p, p-1, p-1) with leading +1, of length 7p-2."""
    p = require_int(p, "p")
    if p < 3 or p % 2 == 0:
        raise DomainError(f"The family is defined for odd p >= 3, got p={p}")
    return RunLengthEncoding(PLUS, (p, p, 2 * p, p, p - 1, p - 1))


def family_counterexample(p: int) -> CounterexampleRecord:
    """
    Build the family member for odd p >= 3 with t = (7p - 3) / 2.

    The prefix is audited rather than trusted, so calling this for growing
    p shows how far the family stays valid.

    Raises:
        DomainError: If p is even or below 3.
        FalsificationError: If the prefix breaks an equation (k) up to t,
            claim (iv) holds, or the failure is not the expected one at k=3.
    """
    rle = family_rle(p)
    t = (7 * p - 3) // 2
    record = record_from_prefix(rle_decode(rle), t, FAMILY_SOURCE)
    if 3 not in record.failing_k or record.z_prefix.prefix(7) != FAMILY_Z_PREFIX:
        raise FalsificationError(
            f"Family member p={p} fails claim (iv) at {list(record.failing_k)} "
            f"with z={format_sequence(record.z_prefix)}"
        )
    return record


def _eq_holds(values: Sequence[int], k: int) -> bool:
    """Equation (k) on a 0-based list holding at least 2k+1 values."""
    total = 0
    for i in range(1, k + 1):
        term = values[i - 1] * values[2 * k + 1 - i]
        total += term if i % 2 else -term
    return total == k % 2


def _head(p: int) -> List[int]:
    return [PLUS] * p + [MINUS]


def _head_ok(head: Sequence[int]) -> bool:
    return all(_eq_holds(head, (m - 1) // 2) for m in range(3, len(head) + 1, 2))


def _extensions(values: List[int], stop: int) -> Iterator[Tuple[int, ...]]:
    """Yield every extension of ``values`` to length ``stop`` that keeps
    all decidable equations (k) satisfied, in lexicographic order."""
    if len(values) == stop:
        yield tuple(values)
        return
    position = len(values) + 1
    for sign in (PLUS, MINUS):
        values.append(sign)
        if position % 2 == 0 or _eq_holds(values, (position - 1) // 2):
            yield from _extensions(values, stop)
        values.pop()


def _counterexamples_below(values: Sequence[int], p: int, t: int) -> Iterator[CounterexampleRecord]:
    for prefix in _extensions(list(values), 2 * t + 1):
        x = BinarySequence(prefix)
        if not check_claim_iv(x, p, t).ok:
            yield record_from_prefix(x, t, SEARCH_SOURCE)


def _search_subtree(task) -> List[CounterexampleRecord]:
    values, p, t, limit = task
    return list(itertools.islice(_counterexamples_below(values, p, t), limit))


def search(config: SearchConfig) -> List[CounterexampleRecord]:
    """
    Find every (2t+1)-element prefix with x_1..x_p = +1, x_{p+1} = -1,
    equations (k) for 1 <= k <= t, and a failing claim (iv).

    With ``thread_count`` > 1 the tree is cut ``SPLIT_DEPTH`` positions
    below the fixed head and the subtrees run in worker processes; their
    results are concatenated in subtree order, which is the order a single
    worker would produce.

    Args:
        config: Search parameters.

    Returns:
        Records in lexicographic order (+1 before -1), at most
        ``config.max_results`` of them. Empty when t < p.
    """
    if not isinstance(config, SearchConfig):
        raise TypeError("search expects a SearchConfig")

    p, t = config.p, config.t
    if t < p:
        return []
    head = _head(p)
    if not _head_ok(head):
        return []

    workers = config.thread_count or 1
    if workers == 1:
        return _search_subtree((head, p, t, config.max_results))

    split = min(2 * t + 1, len(head) + SPLIT_DEPTH)
    tasks = [(list(stub), p, t, config.max_results) for stub in _extensions(list(head), split)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        records = [record for chunk in pool.map(_search_subtree, tasks) for record in chunk]
    if config.max_results is not None:
        records = records[:config.max_results]
    return records


def naive_search(config: SearchConfig) -> List[CounterexampleRecord]:
    """
    Unpruned oracle for ``search``: audit all 2^(2t+1) prefixes and keep
    those meeting the premise with leading run p and failing claim (iv).

    Raises:
        CapacityError: If 2t+1 exceeds ``MAX_NAIVE_LENGTH``.
    """
    if not isinstance(config, SearchConfig):
        raise TypeError("naive_search expects a SearchConfig")

    length = 2 * config.t + 1
    if length > MAX_NAIVE_LENGTH:
        raise CapacityError(
            f"Unpruned enumeration is limited to prefixes of {MAX_NAIVE_LENGTH}, got {length}"
        )

    records = []
    for values in itertools.product((PLUS, MINUS), repeat=length):
        prefix = BinarySequence(values)
        report = theorem1_audit(pad_for_audit(prefix, config.t), config.t)
        if report.premise_ok and report.p == config.p and report.claim_iv_ok is False:
            records.append(_record(prefix, config.t, report, SEARCH_SOURCE))
            if config.max_results is not None and len(records) == config.max_results:
                break
    return records


def verify_record(record: CounterexampleRecord) -> Theorem1Report:
    """
    Re-audit a record end to end: decode, pad to 2t+2, run the audit and
    compare premise, p, z_prefix and failing_k.

    Returns:
        The fresh report.

    Raises:
        RecordMismatchError: On any disagreement; nothing is corrected.
    """
    if not isinstance(record, CounterexampleRecord):
        raise TypeError("verify_record expects a CounterexampleRecord")

    report = theorem1_audit(pad_for_audit(record.prefix, record.t), record.t)
    label = format_rle(record.rle)
    if not report.premise_ok:
        raise RecordMismatchError(
            f"{label}: premise does not hold ({'; '.join(report.premise_failures)})",
            expected="premise holds",
            observed=list(report.premise_failures),
        )
    if report.p != record.p:
        raise RecordMismatchError(
            f"{label}: expected p={record.p}, observed p={report.p}",
            expected=record.p,
            observed=report.p,
        )
    expected_z = derived_sequence(record.prefix, record.p)
    if record.z_prefix != expected_z:
        raise RecordMismatchError(
            f"{label}: expected z_prefix={format_sequence(expected_z)}, "
            f"recorded z_prefix={format_sequence(record.z_prefix)}",
            expected=format_sequence(expected_z),
            observed=format_sequence(record.z_prefix),
        )
    if report.failing_iv_k != record.failing_k:
        raise RecordMismatchError(
            f"{label}: expected failing_k={list(record.failing_k)}, "
            f"observed failing_k={list(report.failing_iv_k)}",
            expected=list(record.failing_k),
            observed=list(report.failing_iv_k),
        )
    return report


def claim_status_summary(records: Sequence[CounterexampleRecord]) -> Dict[str, Dict[str, int]]:
    """Count, per claim (i)-(iii), the records where it held, failed or was not recorded."""
    summary = {}
    for label, attr in (('i', 'claim_i_ok'), ('ii', 'claim_ii_ok'), ('iii', 'claim_iii_ok')):
        verdicts = [getattr(record, attr) for record in records]
        summary[label] = {
            'held': sum(1 for v in verdicts if v is True),
            'failed': sum(1 for v in verdicts if v is False),
            'untested': sum(1 for v in verdicts if v is None),
        }
    return summary


def format_catalog_table(records: Sequence[CounterexampleRecord]) -> str:
    """One tab-separated line per record: rle, t, p, failing_k, source."""
    lines = [TABLE_HEADER]
    for record in records:
        lines.append('\t'.join([
            format_rle(record.rle),
            str(record.t),
            str(record.p),
            ','.join(str(k) for k in record.failing_k),
            record.source,
        ]))
    return '\n'.join(lines) + '\n'


def parse_catalog_table(text: str) -> List[CounterexampleRecord]:
    """
    Read records written by ``format_catalog_table``.

    Blank lines and lines starting with '#' are skipped. A missing source
    column defaults to "catalog". Claim (i)-(iii) verdicts are not part of
    the table and come back as None.

    Raises:
        ValueError: If a line does not have 4 or 5 fields or a number is invalid.
    """
    if not isinstance(text, str):
        raise TypeError("Catalog table must be a string")

    records = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        fields = line.rstrip('\n').split('\t')
        if len(fields) not in (4, 5):
            raise ValueError(f"Line {line_no}: expected 4 or 5 tab-separated fields, got {len(fields)}")
        try:
            rle = parse_rle(fields[0])
            t, p = int(fields[1]), int(fields[2])
            failing = tuple(int(k) for k in fields[3].split(','))
        except ValueError as e:
            raise ValueError(f"Line {line_no}: {e}")
        source = fields[4].strip() if len(fields) == 5 else CATALOG_SOURCE
        prefix = rle_decode(rle)
        records.append(CounterexampleRecord(
            rle=rle,
            t=t,
            p=p,
            z_prefix=derived_sequence(prefix, p),
            failing_k=failing,
            source=source,
        ))
    return records


def record_to_dict(record: CounterexampleRecord) -> Dict:
    return {
        'rle': format_rle(record.rle),
        't': record.t,
        'p': record.p,
        'z_prefix': format_sequence(record.z_prefix),
        'failing_k': list(record.failing_k),
        'source': record.source,
        'claims': {
            'i': record.claim_i_ok,
            'ii': record.claim_ii_ok,
            'iii': record.claim_iii_ok,
        },
    }


def record_from_dict(data: Dict) -> CounterexampleRecord:
    """
    Rebuild a record written by ``record_to_dict``.

    Raises:
        TypeError: If data is not a dictionary.
        KeyError: If a required field is missing.
    """
    if not isinstance(data, dict):
        raise TypeError("Record data must be a dictionary")

    claims = data.get('claims', {})
    return CounterexampleRecord(
        rle=parse_rle(data['rle']),
        t=data['t'],
        p=data['p'],
        z_prefix=parse_sequence(data['z_prefix']),
        failing_k=tuple(data['failing_k']),
        source=data['source'],
        claim_i_ok=claims.get('i'),
        claim_ii_ok=claims.get('ii'),
        claim_iii_ok=claims.get('iii'),
    )
