"""
Equation (k) and executable checks for the four claims of Theorem 1.

A binary sequence x satisfies equation (k) when

    (1 + (-1)^(k+1)) / 2 = sum_{i=1}^{k} (-1)^(i+1) x_i x_{2k+2-i}

Whether it holds depends only on x_1 ... x_{2k+1}. Theorem 1 assumes x
satisfies (k) for 1 <= k <= t and starts with a run of p > 1 ones followed
by -1 (``Theorem1Context``), and claims:

    (i)   x_i x_{i+1} = x_{2i} x_{2i+1}            for 1 <= i <= t
    (ii)  p <= 2t+1 implies p is odd
    (iii) pj + r <= 2t+1, 1 <= r <= p implies x_{p(j-1)+r} = x_{p(j-1)+1}
    (iv)  z_j = x_{p(j-1)+1} satisfies (k)        for integer k <= t/p

Each checker lists every failure it finds instead of stopping at the first.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import DomainError, PremiseError
from .seqcore import (
    MINUS,
    PLUS,
    BinarySequence,
    format_sequence,
    parse_sequence,
    require_int,
)


def _require_positive(value, name: str) -> int:
    value = require_int(value, name)
    if value < 1:
        raise DomainError(f"{name} must be a positive integer, got {value}")
    return value


def _require_sequence(x) -> BinarySequence:
    if not isinstance(x, BinarySequence):
        raise TypeError("Expected a BinarySequence")
    return x


def k_max(n: int) -> int:
    """Largest k with k < (n-1)/2, i.e. floor((n-2)/2), never below 0."""
    n = require_int(n, "Length n")
    return max(0, (n - 2) // 2)


def audit_length(t: int) -> int:
    """Length 2t+2 to which a (2t+1)-element prefix is padded before auditing."""
    return 2 * _require_positive(t, "t") + 2


def pad_for_audit(prefix: BinarySequence, t: int) -> BinarySequence:
    """
    Pad a prefix with +1 up to ``audit_length(t)`` so that t <= k_max(n).

    Equation (k) for k <= t never reads past position 2t+1, so the padding
    value cannot change any verdict.

    Raises:
        DomainError: If the prefix is already longer than 2t+2.
    """
    return _require_sequence(prefix).padded(audit_length(t), PLUS)


def eq_k_lhs(k: int) -> int:
    """Left side of equation (k): 1 for odd k, 0 for even k."""
    k = _require_positive(k, "k")
    return 1 if k % 2 else 0


def eq_k_rhs(x: BinarySequence, k: int) -> int:
    """
    Right side of equation (k): sum_{i=1}^{k} (-1)^(i+1) x_i x_{2k+2-i}.

    Raises:
        DomainError: If k < 1 or 2k+1 > n.
    """
    x = _require_sequence(x)
    k = _require_positive(k, "k")
    if 2 * k + 1 > x.n:
        raise DomainError(f"Equation ({k}) reads x_1..x_{2 * k + 1} but n={x.n}")

    e = x.elements
    total = 0
    for i in range(1, k + 1):
        term = e[i - 1] * e[2 * k + 1 - i]
        total += term if i % 2 else -term
    return total


def satisfies_eq_k(x: BinarySequence, k: int) -> bool:
    """
    True iff x satisfies equation (k).

    Only evaluability (2k+1 <= n) is required here; the stricter bound
    k < (n-1)/2 is applied by ``max_t``.

    Raises:
        DomainError: If k < 1 or 2k+1 > n.
    """
    return eq_k_rhs(x, k) == eq_k_lhs(k)


def max_t(x: BinarySequence) -> int:
    """
    Largest t such that x satisfies (k) for every 1 <= k <= t, capped at
    k_max(n). Returns 0 when equation (1) fails or n < 4.
    """
    x = _require_sequence(x)
    for k in range(1, k_max(x.n) + 1):
        if not satisfies_eq_k(x, k):
            return k - 1
    return k_max(x.n)


def leading_run(x: BinarySequence) -> int:
    """
    Length p of the maximal prefix of +1 values.

    Raises:
        PremiseError: If x_1 = -1.
    """
    x = _require_sequence(x)
    if x.at(1) == MINUS:
        raise PremiseError("x_1 = -1; Theorem 1 needs the sequence to start with +1")

    p = 0
    for v in x.elements:
        if v != PLUS:
            break
        p += 1
    return p


def derived_sequence(x: BinarySequence, p: int) -> BinarySequence:
    """
    z_j = x_{p(j-1)+1} for every j with p(j-1)+1 <= n.

    The result has floor((n-1)/p) + 1 elements.

    Raises:
        DomainError: If p is outside 1..n.
    """
    x = _require_sequence(x)
    p = _require_positive(p, "p")
    if p > x.n:
        raise DomainError(f"p={p} exceeds n={x.n}")
    return BinarySequence(x.elements[::p])


@dataclass(frozen=True)
class ClaimVerdict:
    """Outcome of one claim checker and the witnesses against it."""

    ok: bool
    failures: Tuple = ()


def _require_evaluable(x: BinarySequence, t: int) -> None:
    if 2 * t + 1 > x.n:
        raise DomainError(f"t={t} needs n >= {2 * t + 1}, got n={x.n}")


def check_claim_i(x: BinarySequence, t: int) -> ClaimVerdict:
    """
    Check x_i x_{i+1} = x_{2i} x_{2i+1} for 1 <= i <= t.

    Returns:
        Verdict whose failures are the violating i, in increasing order.

    Raises:
        DomainError: If 2t+1 > n.
    """
    x = _require_sequence(x)
    t = _require_positive(t, "t")
    _require_evaluable(x, t)

    failing = [i for i in range(1, t + 1)
               if x.at(i) * x.at(i + 1) != x.at(2 * i) * x.at(2 * i + 1)]
    return ClaimVerdict(not failing, tuple(failing))


def check_claim_ii(p: int, t: int) -> bool:
    """True iff p > 2t+1 or p is odd."""
    p = require_int(p, "p")
    t = _require_positive(t, "t")
    if p < 2:
        raise DomainError(f"Claim (ii) assumes p > 1, got p={p}")
    return p > 2 * t + 1 or p % 2 == 1


def check_claim_iii(x: BinarySequence, p: int, t: int) -> ClaimVerdict:
    """
    Check block constancy x_{p(j-1)+r} = x_{p(j-1)+1} for all j >= 1 and
    1 <= r <= p with pj + r <= 2t+1.

    Returns:
        Verdict whose failures are the violating (j, r) pairs.

    Raises:
        DomainError: If 2t+1 > n or p < 2.
    """
    x = _require_sequence(x)
    p = require_int(p, "p")
    t = _require_positive(t, "t")
    if p < 2:
        raise DomainError(f"Claim (iii) assumes p > 1, got p={p}")
    _require_evaluable(x, t)

    bound = 2 * t + 1
    failing = []
    j = 1
    while p * j + 1 <= bound:
        head = x.at(p * (j - 1) + 1)
        for r in range(1, p + 1):
            if p * j + r > bound:
                break
            if x.at(p * (j - 1) + r) != head:
                failing.append((j, r))
        j += 1
    return ClaimVerdict(not failing, tuple(failing))


def check_claim_iv(x: BinarySequence, p: int, t: int) -> ClaimVerdict:
    """
    Check that z = derived_sequence(x, p) satisfies (k) for every integer
    1 <= k <= floor(t/p). Vacuously true when t < p.

    Returns:
        Verdict whose failures are the k where z breaks equation (k).

    Raises:
        DomainError: If z is too short to evaluate equation (floor(t/p)).
    """
    x = _require_sequence(x)
    p = _require_positive(p, "p")
    t = _require_positive(t, "t")

    bound = t // p
    if bound == 0:
        return ClaimVerdict(True, ())

    z = derived_sequence(x, p)
    if z.n < 2 * bound + 1:
        raise DomainError(
            f"z has {z.n} elements; equation ({bound}) needs {2 * bound + 1}"
        )
    failing = [k for k in range(1, bound + 1) if not satisfies_eq_k(z, k)]
    return ClaimVerdict(not failing, tuple(failing))


@dataclass(frozen=True)
class Theorem1Report:
    """
    Premise and claim verdicts of one Theorem 1 audit.

    Claim fields are None when the premise does not hold (not applicable).
    """

    n: int
    t: int
    premise_ok: bool
    premise_failures: Tuple[str, ...] = ()
    p: Optional[int] = None
    z: Optional[BinarySequence] = None
    claim_i_ok: Optional[bool] = None
    claim_ii_ok: Optional[bool] = None
    claim_iii_ok: Optional[bool] = None
    claim_iv_ok: Optional[bool] = None
    failing_i: Tuple[int, ...] = ()
    failing_iii: Tuple[Tuple[int, int], ...] = field(default=())
    failing_iv_k: Tuple[int, ...] = ()

    @property
    def failed_claims(self) -> List[str]:
        """Labels of the claims that were checked and failed."""
        verdicts = [('i', self.claim_i_ok), ('ii', self.claim_ii_ok),
                    ('iii', self.claim_iii_ok), ('iv', self.claim_iv_ok)]
        return [label for label, ok in verdicts if ok is False]

    @property
    def all_claims_hold(self) -> bool:
        return self.premise_ok and not self.failed_claims

    @property
    def falsified(self) -> bool:
        """A claim failed while the premise held: a counterexample."""
        return self.premise_ok and bool(self.failed_claims)


def _premise_failures(x: BinarySequence, t: int) -> Tuple[List[str], Optional[int]]:
    """Reasons the premise fails (empty when it holds) and p when defined."""
    reasons = []
    if 2 * t + 1 > x.n:
        reasons.append(f"equations (k) up to t={t} need n >= {2 * t + 1}, got n={x.n}")
    else:
        broken = next((k for k in range(1, t + 1) if not satisfies_eq_k(x, k)), None)
        if broken is not None:
            reasons.append(f"equation ({broken}) does not hold")

    p = None
    if x.at(1) == MINUS:
        reasons.append("x_1 = -1; the leading run must be +1")
    else:
        p = leading_run(x)
        if p == x.n:
            reasons.append("no -1 follows the leading run of +1")
        elif p == 1:
            reasons.append("leading run has p=1; the premise needs p > 1")
    return reasons, p


@dataclass(frozen=True)
class Theorem1Context:
    """
    A sequence together with the t, p and z of a satisfied premise.

    Build one with ``Theorem1Context.from_sequence``; the constructor
    itself does not re-check the premise.
    """

    x: BinarySequence
    t: int
    p: int
    z: BinarySequence

    @classmethod
    def from_sequence(cls, x: BinarySequence, t: int) -> "Theorem1Context":
        """
        Check the premise of Theorem 1 and derive p and z.

        Raises:
            PremiseError: If the premise does not hold; the message lists
                every reason.
        """
        x = _require_sequence(x)
        t = _require_positive(t, "t")
        reasons, p = _premise_failures(x, t)
        if reasons:
            raise PremiseError("; ".join(reasons))
        return cls(x=x, t=t, p=p, z=derived_sequence(x, p))

    def audit(self) -> Theorem1Report:
        """Check the four claims of Theorem 1 against this context."""
        claim_i = check_claim_i(self.x, self.t)
        claim_iii = check_claim_iii(self.x, self.p, self.t)
        claim_iv = check_claim_iv(self.x, self.p, self.t)
        return Theorem1Report(
            n=self.x.n,
            t=self.t,
            premise_ok=True,
            p=self.p,
            z=self.z,
            claim_i_ok=claim_i.ok,
            claim_ii_ok=check_claim_ii(self.p, self.t),
            claim_iii_ok=claim_iii.ok,
            claim_iv_ok=claim_iv.ok,
            failing_i=claim_i.failures,
            failing_iii=claim_iii.failures,
            failing_iv_k=claim_iv.failures,
        )


def theorem1_audit(x: BinarySequence, t: int) -> Theorem1Report:
    """
    Audit Theorem 1 on x with caller-supplied t.

    The premise holds when 2t+1 <= n, x satisfies (k) for 1 <= k <= t,
    x_1 = +1, the leading run has p > 1 and x_{p+1} = -1 exists. When it
    holds all four claims are checked; otherwise they are left as None and
    the reasons are listed in ``premise_failures``.

    Args:
        x: Sequence to audit.
        t: Number of equations (k) assumed by the premise.

    Returns:
        The report; premise and claim failures never raise.
    """
    x = _require_sequence(x)
    t = _require_positive(t, "t")

    reasons, p = _premise_failures(x, t)
    if reasons:
        return Theorem1Report(n=x.n, t=t, premise_ok=False,
                              premise_failures=tuple(reasons), p=p)
    return Theorem1Context(x=x, t=t, p=p, z=derived_sequence(x, p)).audit()


def report_to_dict(report: Theorem1Report) -> Dict:
    """Convert a report to JSON-ready primitives."""
    if not isinstance(report, Theorem1Report):
        raise TypeError("Expected a Theorem1Report")
    return {
        'n': report.n,
        't': report.t,
        'premise_ok': report.premise_ok,
        'premise_failures': list(report.premise_failures),
        'p': report.p,
        'z': format_sequence(report.z) if report.z is not None else None,
        'claims': {
            'i': report.claim_i_ok,
            'ii': report.claim_ii_ok,
            'iii': report.claim_iii_ok,
            'iv': report.claim_iv_ok,
        },
        'failing_i': list(report.failing_i),
        'failing_iii': [list(pair) for pair in report.failing_iii],
        'failing_iv_k': list(report.failing_iv_k),
    }


def report_from_dict(data: Dict) -> Theorem1Report:
    """
    Rebuild a report written by ``report_to_dict``.

    Raises:
        TypeError: If data is not a dictionary.
        KeyError: If a required field is missing.
    """
    if not isinstance(data, dict):
        raise TypeError("Report data must be a dictionary")

    claims = data['claims']
    return Theorem1Report(
        n=data['n'],
        t=data['t'],
        premise_ok=data['premise_ok'],
        premise_failures=tuple(data.get('premise_failures', ())),
        p=data.get('p'),
        z=parse_sequence(data['z']) if data.get('z') else None,
        claim_i_ok=claims.get('i'),
        claim_ii_ok=claims.get('ii'),
        claim_iii_ok=claims.get('iii'),
        claim_iv_ok=claims.get('iv'),
        failing_i=tuple(data.get('failing_i', ())),
        failing_iii=tuple(tuple(pair) for pair in data.get('failing_iii', ())),
        failing_iv_k=tuple(data.get('failing_iv_k', ())),
    )
