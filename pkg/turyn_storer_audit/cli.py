"""
Command-line surface: verify, falsify, barker and rle subcommands.

Each invocation builds one RunReport. Without ``--json`` a readable summary
is printed; with it the report is printed as a single JSON document. The
exit code depends only on the report status.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from . import __version__
from .barker import (
    barker_search,
    eq_k_profile,
    odd_nonexistence_scan,
    result_to_dict,
    scan_anomalies,
)
from .errors import FalsificationError, RecordMismatchError
from .falsifier import (
    SearchConfig,
    claim_status_summary,
    family_counterexample,
    format_catalog_table,
    published_catalog,
    record_to_dict,
    search,
    verify_record,
)
from .seqcore import (
    PLUS,
    format_rle,
    format_sequence,
    parse_rle,
    parse_sequence,
    rle_decode,
    rle_encode,
)
from .turynstorer import max_t, report_to_dict, theorem1_audit

# Configuration constants
TOOL_VERSION = __version__
THREADS_ENV_VAR = "TURYN_STORER_THREADS"

STATUS_EXIT_CODES = {
    'ok': 0,
    'found': 0,
    'falsified': 1,
    'empty': 1,
    'mismatch': 1,
    'error': 1,
    'usage': 2,
}


@dataclass(frozen=True)
class RunReport:
    """Self-describing outcome of one command."""

    command: str
    inputs: Dict = field(default_factory=dict)
    verdicts: Dict = field(default_factory=dict)
    status: str = 'ok'
    tool_version: str = TOOL_VERSION

    def __post_init__(self):
        if self.status not in STATUS_EXIT_CODES:
            raise ValueError(f"Unknown report status: {self.status!r}")

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT_CODES[self.status]

    def to_dict(self) -> Dict:
        return {
            'command': self.command,
            'inputs': self.inputs,
            'verdicts': self.verdicts,
            'status': self.status,
            'tool_version': self.tool_version,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: Dict) -> "RunReport":
        """
        Rebuild a report from its dictionary form.

        Raises:
            TypeError: If data is not a dictionary.
            KeyError: If command or status is missing.
        """
        if not isinstance(data, dict):
            raise TypeError("Report data must be a dictionary")
        return cls(
            command=data['command'],
            inputs=data.get('inputs', {}),
            verdicts=data.get('verdicts', {}),
            status=data['status'],
            tool_version=data.get('tool_version', TOOL_VERSION),
        )

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls.from_dict(json.loads(text))


def _usage(command: str, inputs: Dict, message: str) -> RunReport:
    return RunReport(command, inputs, {'error': message}, 'usage')


def _warn(message: str) -> None:
    print(f"⚠️  Warning: {message}", file=sys.stderr)


def _error(message: str) -> None:
    print(f"❌ Error: {message}", file=sys.stderr)


def default_thread_count() -> int:
    """Worker count from the environment, 1 when unset or invalid."""
    raw = os.environ.get(THREADS_ENV_VAR, '').strip()
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        _warn(f"{THREADS_ENV_VAR}={raw!r} is not an integer; using 1 worker")
        return 1
    if value < 1:
        _warn(f"{THREADS_ENV_VAR}={value} is not positive; using 1 worker")
        return 1
    return value


def cmd_verify(args) -> RunReport:
    """Audit Theorem 1 on one sequence given as RLE or literal."""
    inputs = {'rle': args.rle, 'seq': args.seq, 't': args.t, 'pad': args.pad}
    try:
        if args.rle is not None:
            x = rle_decode(parse_rle(args.rle, default_sign=PLUS))
        else:
            x = parse_sequence(args.seq)
    except ValueError as e:
        return _usage('verify', inputs, str(e))

    if args.t < 1:
        return _usage('verify', inputs, f"--t must be at least 1, got {args.t}")
    if args.pad is not None:
        if args.pad < x.n:
            return _usage('verify', inputs, f"--pad {args.pad} is shorter than the sequence ({x.n})")
        x = x.padded(args.pad, PLUS)

    inputs['sequence'] = format_sequence(x)
    inputs['n'] = x.n
    report = theorem1_audit(x, args.t)
    verdicts = report_to_dict(report)
    verdicts['max_t'] = max_t(x)
    if x.n >= 3:
        verdicts['eq_k_profile'] = sorted(eq_k_profile(x))

    if not report.premise_ok:
        status = 'error'
    elif report.falsified:
        status = 'falsified'
    else:
        status = 'ok'
    return RunReport('verify', inputs, verdicts, status)


def _write_table(path: str, records) -> Optional[str]:
    """Write the catalog table; returns an error message instead of raising."""
    try:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(format_catalog_table(records))
    except OSError as e:
        return f"Could not write {path} ({e})"
    return None


def cmd_falsify(args) -> RunReport:
    """Emit the published catalog, one family member, or a search result."""
    if args.catalog:
        mode = 'catalog'
    elif args.family:
        mode = 'family'
    else:
        mode = 'search'
    inputs = {'mode': mode, 'p': args.p, 't': args.t, 'max_results': args.max_results}
    verdicts = {}

    if mode == 'catalog':
        try:
            records = published_catalog()
            for record in records:
                verify_record(record)
        except (FalsificationError, RecordMismatchError) as e:
            return RunReport('falsify', inputs, {'error': str(e)}, 'mismatch')
        status = 'found'

    elif mode == 'family':
        if args.p is None:
            return _usage('falsify', inputs, "--family needs --p")
        try:
            records = [family_counterexample(args.p)]
        except FalsificationError as e:
            return RunReport('falsify', inputs, {'error': str(e)}, 'error')
        except ValueError as e:
            return _usage('falsify', inputs, str(e))
        status = 'found'

    else:
        if args.p is None or args.t is None:
            return _usage('falsify', inputs, "a search needs both --p and --t")
        try:
            config = SearchConfig(p=args.p, t=args.t, max_results=args.max_results,
                                  thread_count=args.threads)
        except ValueError as e:
            return _usage('falsify', inputs, str(e))
        records = search(config)
        status = 'found' if records else 'empty'
        verdicts['claim_summary'] = claim_status_summary(records)

    verdicts['count'] = len(records)
    verdicts['records'] = [record_to_dict(record) for record in records]

    if args.out:
        problem = _write_table(args.out, records)
        if problem:
            verdicts['error'] = problem
            status = 'error'
    return RunReport('falsify', inputs, verdicts, status)


def cmd_barker(args) -> RunReport:
    """List Barker sequences of one length, or scan odd lengths above 13."""
    inputs = {'n': args.n, 'odd_scan': args.odd_scan, 'profile': args.profile}
    try:
        if args.n is not None:
            result = barker_search(args.n, args.threads)
        else:
            entries = odd_nonexistence_scan(args.odd_scan, args.threads)
    except ValueError as e:
        return _usage('barker', inputs, str(e))

    if args.n is not None:
        verdicts = result_to_dict(result)
        if args.profile and result.n >= 3:
            verdicts['eq_k_profiles'] = {
                format_sequence(x): sorted(eq_k_profile(x)) for x in result.sequences
            }
        if not args.json:
            print(f"⏱  Searched n={result.n} in {result.elapsed:.3f}s", file=sys.stderr)
        return RunReport('barker', inputs, verdicts, 'ok')

    anomalies = scan_anomalies(entries)
    verdicts = {
        'counts': [{'n': n, 'count': count} for n, count in entries],
        'anomalies': [{'n': n, 'count': count} for n, count in anomalies],
    }
    return RunReport('barker', inputs, verdicts, 'falsified' if anomalies else 'ok')


def cmd_rle(args) -> RunReport:
    """Convert between RLE text and sequence literals."""
    inputs = {'action': args.action, 'input': args.text}
    try:
        if args.action == 'decode':
            output = format_sequence(rle_decode(parse_rle(args.text, default_sign=PLUS)))
        else:
            output = format_rle(rle_encode(parse_sequence(args.text)))
    except ValueError as e:
        return _usage('rle', inputs, str(e))
    return RunReport('rle', inputs, {'output': output}, 'ok')


def _claim_mark(ok: Optional[bool]) -> str:
    if ok is None:
        return "n/a"
    return "holds" if ok else "FAILS"


def render_text(report: RunReport) -> List[str]:
    """Readable lines for a report; the JSON form carries the full detail."""
    v = report.verdicts
    if report.status == 'usage':
        return []
    if report.command == 'rle':
        return [v['output']]

    if report.command == 'verify':
        p_part = f"  p={v['p']}" if v['p'] is not None else ""
        lines = [f"Sequence (n={report.inputs['n']}): {report.inputs['sequence']}",
                 f"t={v['t']}{p_part}  max_t={v['max_t']}"]
        if 'eq_k_profile' in v:
            lines.append(f"eq(k) holds for k in {v['eq_k_profile']}")
        if not v['premise_ok']:
            lines.append("⚠️  Premise of Theorem 1 not satisfied:")
            lines.extend(f"   - {reason}" for reason in v['premise_failures'])
            return lines
        lines.append(f"z = {v['z']}")
        claims = v['claims']
        lines.append(f"(i)   {_claim_mark(claims['i'])}" +
                     (f"  failing i: {v['failing_i']}" if v['failing_i'] else ""))
        lines.append(f"(ii)  {_claim_mark(claims['ii'])}")
        lines.append(f"(iii) {_claim_mark(claims['iii'])}" +
                     (f"  failing (j, r): {v['failing_iii']}" if v['failing_iii'] else ""))
        lines.append(f"(iv)  {_claim_mark(claims['iv'])}" +
                     (f"  failing k: {v['failing_iv_k']}" if v['failing_iv_k'] else ""))
        if report.status == 'falsified':
            lines.append("🚨 Counterexample: a claim fails although the premise holds")
        else:
            lines.append("✅ All four claims hold")
        return lines

    if report.command == 'falsify':
        if 'records' not in v:
            return [f"❌ {v.get('error', report.status)}"]
        lines = [f"{'rle':<28} {'t':>3} {'p':>3}  failing_k  source"]
        for record in v['records']:
            failing = ','.join(str(k) for k in record['failing_k'])
            lines.append(f"{record['rle']:<28} {record['t']:>3} {record['p']:>3}  {failing:<9}  {record['source']}")
        lines.append(f"{v['count']} record(s)")
        if 'claim_summary' in v:
            for label, counts in v['claim_summary'].items():
                lines.append(f"claim ({label}): held {counts['held']}, failed {counts['failed']}")
        if 'error' in v:
            lines.append(f"❌ {v['error']}")
        return lines

    if report.command == 'barker':
        if 'counts' in v:
            lines = [f"{'n':>4} {'count':>6}"]
            lines.extend(f"{entry['n']:>4} {entry['count']:>6}" for entry in v['counts'])
            for entry in v['anomalies']:
                lines.append(f"🚨 Odd-length Barker sequences found at n={entry['n']} ({entry['count']})")
            return lines
        lines = list(v['sequences'])
        profiles = v.get('eq_k_profiles', {})
        if profiles:
            lines = [f"{seq}  eq(k) for k in {profiles[seq]}" for seq in v['sequences']]
        lines.append(f"{v['count']} Barker sequence(s) of length {v['n']}")
        return lines

    return []


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true',
                        help='Print the structured report instead of a table')
    common.add_argument('--threads', type=int, default=None,
                        help=f'Worker processes for searches (default: ${THREADS_ENV_VAR} or 1)')

    parser = argparse.ArgumentParser(
        prog='turyn-storer-audit',
        description="Audit Theorem 1 of Turyn and Storer, hunt counterexamples and search Barker sequences",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  turyn-storer-audit verify --rle +3,3,6,3,2,2 --t 9
  turyn-storer-audit falsify --catalog
  turyn-storer-audit falsify --p 3 --t 9 --out found.tsv
  turyn-storer-audit barker --odd-scan 21
  turyn-storer-audit rle decode +3,3,6,3,2,2

Literals that start with '-' must be attached with '=' (--seq=-+-) or
follow '--' (rle encode -- -+-).

Exit codes:
  0  claims hold / records found
  1  a claim is falsified, the search came back empty, or a check failed
  2  usage or parse error
        """
    )
    parser.add_argument('--version', action='version', version=f'turyn-storer-audit {TOOL_VERSION}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    verify = subparsers.add_parser('verify', parents=[common], help='Audit Theorem 1 on one sequence')
    source = verify.add_mutually_exclusive_group(required=True)
    source.add_argument('--rle', help='Run length encoding, e.g. +3,3,6,3,2,2 (sign defaults to +)')
    source.add_argument('--seq', help="Sequence literal over '+' and '-'")
    verify.add_argument('--t', type=int, required=True, help='Equations (k) assumed for 1 <= k <= t')
    verify.add_argument('--pad', type=int, default=None, help='Pad with +1 up to this length')
    verify.set_defaults(handler=cmd_verify)

    falsify = subparsers.add_parser('falsify', parents=[common], help='Find counterexamples to claim (iv)')
    mode = falsify.add_mutually_exclusive_group()
    mode.add_argument('--catalog', action='store_true', help='Emit the four published counterexamples')
    mode.add_argument('--family', action='store_true', help='Emit the (p,p,2p,p,p-1,p-1) member for --p')
    falsify.add_argument('--p', type=int, default=None, help='Length of the leading +1 run')
    falsify.add_argument('--t', type=int, default=None, help='Number of equations (k) assumed')
    falsify.add_argument('--max-results', type=int, default=None, help='Stop after this many records')
    falsify.add_argument('--out', default=None, help='Also write the records as a tab-separated table')
    falsify.set_defaults(handler=cmd_falsify)

    barker = subparsers.add_parser('barker', parents=[common], help='Exhaustive Barker sequence search')
    target = barker.add_mutually_exclusive_group(required=True)
    target.add_argument('--n', type=int, help='List every Barker sequence of this length')
    target.add_argument('--odd-scan', type=int, metavar='N_MAX', help='Count Barker sequences for odd 13 < n <= N_MAX')
    barker.add_argument('--profile', action='store_true', help='Add each sequence\'s equation (k) profile')
    barker.set_defaults(handler=cmd_barker)

    rle = subparsers.add_parser('rle', parents=[common], help='Convert between RLE text and literals')
    rle.add_argument('action', choices=['encode', 'decode'])
    rle.add_argument('text', nargs='?', default='', help='Literal to encode or RLE to decode')
    rle.set_defaults(handler=cmd_rle)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and print its report.

    Returns:
        Process exit code (see STATUS_EXIT_CODES).
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        args.threads = default_thread_count()
    elif args.threads < 1:
        parser.error(f"--threads must be at least 1, got {args.threads}")

    try:
        report = args.handler(args)
    except KeyboardInterrupt:
        print("\n\n👋 Interrupted.", file=sys.stderr)
        return STATUS_EXIT_CODES['error']

    if args.json:
        print(report.to_json())
    else:
        if report.status == 'usage':
            _error(report.verdicts['error'])
        for line in render_text(report):
            print(line)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
