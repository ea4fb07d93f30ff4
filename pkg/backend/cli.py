"""Command line: verify, analyze, theorems, generate.

Exit codes: 0 success, 1 negative verdict, 2 usage or parse error, 3 gated capability.
"""
import argparse
import json
import logging
import sys
import time
from typing import Any, Dict, List, Optional

from pydantic import BaseModel

from backend.algebra_io import load_algebra, load_corpus, write_corpus
from backend.config import Settings, configure_logging
from backend.core import LeibnizAlgebra
from backend.engel import cartan_subalgebra, engel_representative, engel_subalgebra
from backend.errors import InfiniteField, LeibnizError, NoComplementNeeded
from backend.exactfield import Field
from backend.generators import (
    CorpusEntry,
    cyclic_algebra,
    default_corpus,
    four_dim_example,
    make_entry,
    primitive_split_extension,
    random_nilpotent,
)
from backend.linalg import Subspace
from backend.representations import SMode
from backend.results_store import ResultsStore, new_run_id
from backend.structure import StructureAnalyzer
from backend.theorems import ERROR, FAIL, STATEMENTS, TheoremSuite

logger = logging.getLogger('LeibnizCLI')

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_GATED = 0, 1, 2, 3

FINITE_ONLY = ('socle', 'frattini', 'primitive')
GENERATOR_KINDS = ('split', 'cyclic', 'random-nilpotent', 'four-dim-example')


class AlgebraSummary(BaseModel):
    dim: int
    field: str
    labels: Optional[List[str]] = None


class Report(BaseModel):
    algebra: AlgebraSummary
    properties: Dict[str, Any] = {}


def parse_field(text: str) -> Field:
    """'Q', 'F5', 'Fp5' or a bare prime."""
    text = text.strip()
    if text.upper() == 'Q':
        return Field.rationals()
    digits = text.lstrip('Ffp')
    try:
        return Field.prime(int(digits))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"bad field '{text}': {str(e)}")


def parse_subspace(algebra: LeibnizAlgebra, text: str) -> Subspace:
    """Elements separated by ';', each comma-separated coordinates or a label."""
    parts = [p for p in text.split(';') if p.strip()]
    return algebra.span(algebra.element(p) for p in parts)


def subspace_report(algebra: LeibnizAlgebra, space: Subspace) -> Dict[str, Any]:
    return {'dim': space.dim, 'basis': space.to_strings(), 'span': algebra.describe(space)}


def element_report(algebra: LeibnizAlgebra, v) -> Dict[str, Any]:
    return {'coords': [algebra.field.format(x) for x in v], 'text': algebra.format_element(v)}


def _dump_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def _print_properties(properties: Dict[str, Any], indent: str = '') -> None:
    for key, value in properties.items():
        if isinstance(value, dict) and 'span' in value:
            print(f"{indent}{key}: {value['span']} (dim {value['dim']})")
        elif isinstance(value, dict) and 'text' in value:
            print(f"{indent}{key}: {value['text']}")
        elif isinstance(value, dict):
            print(f"{indent}{key}:")
            _print_properties(value, indent + '  ')
        elif isinstance(value, list) and value and isinstance(value[0], dict) and 'span' in value[0]:
            print(f"{indent}{key}:")
            for item in value:
                print(f"{indent}  - {item['span']}")
        else:
            print(f"{indent}{key}: {value}")


def cmd_verify(args, settings: Settings) -> int:
    algebra = load_algebra(args.file, verify=False)
    verdict = algebra.verify_leibniz()
    if args.json:
        data = {'file': args.file, 'passed': verdict.passed}
        if not verdict.passed:
            data['triple'] = list(verdict.triple)
            data['lhs'] = [algebra.field.format(x) for x in verdict.lhs]
            data['rhs'] = [algebra.field.format(x) for x in verdict.rhs]
        sys.stdout.write(_dump_json(data))
    elif verdict.passed:
        print(f"{args.file}: Leibniz identity holds (dim {algebra.dim} over {algebra.field})")
    else:
        i, j, k = verdict.triple
        print(f"{args.file}: Leibniz identity fails at (e{i}, e{j}, e{k})")
        print(f"  a(bc)        = {algebra.format_element(verdict.lhs)}")
        print(f"  (ab)c + b(ac) = {algebra.format_element(verdict.rhs)}")
    return EXIT_OK if verdict.passed else EXIT_NEGATIVE


def build_report(algebra: LeibnizAlgebra, args, settings: Settings) -> Report:
    requested = [name for name in FINITE_ONLY if getattr(args, name)]
    if requested and not algebra.field.is_finite:
        raise InfiniteField(f"--{', --'.join(requested)} need a prime field, {args.file} is over {algebra.field}")

    props: Dict[str, Any] = {
        'leibniz': algebra.verify_leibniz().passed,
        'lie': algebra.is_lie(),
        'nilpotent': algebra.is_nilpotent(),
        'soluble': algebra.is_soluble(),
    }
    if args.series:
        props['lower_central_series'] = [s.dim for s in algebra.lower_central_series()]
        props['derived_series'] = [s.dim for s in algebra.derived_series()]
        props['nilpotency_class'] = algebra.nilpotency_class()
    if args.centres:
        verdict = algebra.is_lie_quotient()
        props['left_centre'] = subspace_report(algebra, verdict.left_centre)
        props['lie_quotient'] = verdict.passed
    if args.normalizer:
        u = parse_subspace(algebra, args.normalizer)
        norms = algebra.normalizers(u)
        props['normalizer'] = {
            'subspace': subspace_report(algebra, u),
            'left': subspace_report(algebra, norms.left),
            'right': subspace_report(algebra, norms.right),
            'full': subspace_report(algebra, norms.full),
            'right_is_subalgebra': algebra.is_closed(norms.right),
        }
    if args.engel:
        a = algebra.element(args.engel)
        engel = engel_subalgebra(algebra, a)
        props['engel'] = {
            'element': element_report(algebra, a),
            'subalgebra': subspace_report(algebra, engel.space),
            'fitting_image': subspace_report(algebra, engel.fitting_image),
            'representative': element_report(algebra, engel_representative(algebra, a)),
        }
    if args.cartan:
        cert = cartan_subalgebra(algebra)
        props['cartan'] = {
            'subalgebra': subspace_report(algebra, cert.space),
            'nilpotency_class': cert.nilpotency_class,
            'witness': element_report(algebra, cert.witness_element),
        }
    analyzer = StructureAnalyzer(algebra, settings.enumeration_budget)
    if args.socle:
        props['minimal_ideals'] = [subspace_report(algebra, m) for m in analyzer.minimal_ideals()]
        props['socle'] = subspace_report(algebra, analyzer.socle())
    if args.frattini:
        props['frattini'] = subspace_report(algebra, analyzer.frattini())
    if args.primitive:
        cert = analyzer.is_primitive()
        primitive: Dict[str, Any] = {'primitive': cert is not None}
        if cert is not None:
            primitive['socle'] = subspace_report(algebra, cert.socle)
            primitive['lie'] = cert.is_lie
            try:
                primitive['complement'] = subspace_report(algebra, analyzer.primitive_complement(cert))
            except NoComplementNeeded:
                primitive['complement'] = None
            verdict = analyzer.conjugacy_theorem_check()
            primitive['complement_count'] = len(verdict.complements)
            primitive['all_conjugate'] = verdict.passed
        props['primitive'] = primitive
    summary = AlgebraSummary(dim=algebra.dim, field=str(algebra.field),
                             labels=list(algebra.labels) if algebra.labels else None)
    return Report(algebra=summary, properties=props)


def cmd_analyze(args, settings: Settings) -> int:
    start_time = time.time()
    algebra = load_algebra(args.file)
    report = build_report(algebra, args, settings)
    if args.json:
        sys.stdout.write(_dump_json(report.model_dump(exclude_none=True)))
    else:
        print(f"{args.file}: dim {algebra.dim} over {algebra.field}")
        _print_properties(report.properties, '  ')
        print(f"  elapsed: {time.time() - start_time:.3f}s")
    return EXIT_OK


def cmd_theorems(args, settings: Settings) -> int:
    names = None
    if args.filter:
        names = [n.strip() for item in args.filter for n in item.split(',') if n.strip()]
        unknown = [n for n in names if n not in STATEMENTS]
        if unknown:
            print(f"Unknown checks: {', '.join(unknown)}. Known: {', '.join(STATEMENTS)}", file=sys.stderr)
            return EXIT_USAGE
    if args.corpus:
        entries = load_corpus(args.corpus, settings.enumeration_budget)
    else:
        entries = default_corpus(settings)

    suite = TheoremSuite(settings)
    df = suite.run_suite(entries, names)
    if args.json:
        sys.stdout.write(suite.to_json(df))
    else:
        sys.stdout.write(suite.to_text(df))
    if args.db:
        run_id = new_run_id()
        ResultsStore(args.db).store_run(run_id, suite.results, settings.model_dump())
        logger.info(f"Stored run {run_id} in {args.db}")
    failed = df['status'].isin([FAIL, ERROR]).any()
    return EXIT_NEGATIVE if failed else EXIT_OK


def generated_entry(args, settings: Settings) -> CorpusEntry:
    field = args.field
    if args.kind == 'four-dim-example':
        return make_entry('four_dim_example', four_dim_example(field), args.kind, {},
                          nilpotent=False, soluble=True, lie=False)
    if args.kind == 'cyclic':
        return make_entry(f"cyclic-{args.dim}-{field}", cyclic_algebra(args.dim, field), args.kind,
                          {'dim': args.dim}, nilpotent=True, lie=(args.dim == 1))
    if args.kind == 'random-nilpotent':
        algebra = random_nilpotent(args.dim, field, settings.seed, settings.retry_budget)
        return make_entry(f"random-nilpotent-{args.dim}-{field}-{settings.seed}", algebra, args.kind,
                          {'dim': args.dim}, seed=settings.seed, nilpotent=True)
    mode = SMode(args.s_mode)
    algebra = primitive_split_extension(field, args.module_dim, mode)
    return make_entry(f"split-{args.module_dim}-{mode.value}-{field}", algebra, args.kind,
                      {'module_dim': args.module_dim, 's_mode': mode.value}, lie=(mode == SMode.MINUS_T))


def cmd_generate(args, settings: Settings) -> int:
    entry = generated_entry(args, settings)
    written = write_corpus([entry], args.out)
    for path in written:
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='run_leibniz.py', description="Leibniz algebra toolkit")
    parser.add_argument('--json', action='store_true', help="emit JSON on stdout")
    parser.add_argument('--budget', type=int, default=None, help="enumeration budget")
    parser.add_argument('--seed', type=int, default=None, help="random seed")
    sub = parser.add_subparsers(dest='command', required=True)

    verify = sub.add_parser('verify', help="check the Leibniz identity of an algebra file")
    verify.add_argument('file')
    verify.set_defaults(handler=cmd_verify)

    analyze = sub.add_parser('analyze', help="structure report for an algebra file")
    analyze.add_argument('file')
    analyze.add_argument('--series', action='store_true')
    analyze.add_argument('--centres', action='store_true')
    analyze.add_argument('--normalizer', metavar='SUBSPACE', help="elements separated by ';'")
    analyze.add_argument('--engel', metavar='ELEMENT', help="comma-separated coordinates or a label")
    analyze.add_argument('--cartan', action='store_true')
    analyze.add_argument('--socle', action='store_true')
    analyze.add_argument('--frattini', action='store_true')
    analyze.add_argument('--primitive', action='store_true')
    analyze.set_defaults(handler=cmd_analyze)

    theorems = sub.add_parser('theorems', help="run the theorem suite on a corpus")
    theorems.add_argument('corpus', nargs='?', help="corpus directory (default: built-in corpus)")
    theorems.add_argument('--filter', action='append', metavar='NAME', help="check name(s), repeatable")
    theorems.add_argument('--db', metavar='PATH', help="store results in this SQLite file")
    theorems.set_defaults(handler=cmd_theorems)

    generate = sub.add_parser('generate', help="write a generated algebra and manifest")
    generate.add_argument('kind', choices=GENERATOR_KINDS)
    generate.add_argument('--dim', type=int, default=3)
    generate.add_argument('--field', type=parse_field, default=Field.rationals())
    generate.add_argument('--module-dim', type=int, default=1, choices=(1, 2))
    generate.add_argument('--s-mode', default=SMode.ZERO.value, choices=[m.value for m in SMode])
    generate.add_argument('--out', default='corpus')
    generate.set_defaults(handler=cmd_generate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings.from_env(enumeration_budget=args.budget, seed=args.seed)
    except ValueError as e:
        print(f"Error: bad settings: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(settings)
    try:
        return args.handler(args, settings)
    except LeibnizError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return e.exit_code
    except ValueError as e:
        logger.error(f"{args.command} failed: {str(e)}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
