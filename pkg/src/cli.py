"""Command-line interface for the meta-termination lab."""
import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence

import pandas as pd

from .analysis_tool import AnalysisTool
from .config import MetaTerminationConfig
from .core.parser import ParseError
from .core.program import ProgramError
from .interpreter_tool import FRESH, InterpreterTool
from .program_tool import ProgramTool
from .services.catalog import CatalogError, interpreter_names
from .services.corpus import CORPUS_COLUMNS, suite_names
from .services.encodings import EncodingError
from .services.engine import EngineError
from .services.harness import HarnessError
from .services.orderings import OrderingError
from .services.semantics import SemanticsError
from .utils.file_utils import write_frame_csv, write_json_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_COUNTEREXAMPLE = 4

PRECONDITION_ERRORS = (EncodingError, CatalogError, EngineError, ProgramError, HarnessError, OrderingError,
                       SemanticsError)


class UsageError(Exception):
    """Custom exception for command-line usage errors."""
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def setup_logging(level: int) -> None:
    """Configure logging to stderr so stdout carries only reports."""
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True
    )


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="log at LOG_LEVEL (-v) or DEBUG (-vv) instead of WARNING")
    common.add_argument("--json", metavar="PATH", help="write the machine-readable report to PATH")

    budget = _Parser(add_help=False)
    budget.add_argument("--budget", type=int, metavar="N", help="maximum resolution nodes")
    budget.add_argument("--depth", type=int, metavar="D", help="maximum resolution depth")

    parser = _Parser(prog="meta-termination", description="Termination analysis for logic meta-programs.")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)

    check = commands.add_parser("check", parents=[common], help="parse and summarise a program")
    check.add_argument("file", help="program file or directory of .pl files")

    for name, description in (("run", "answers and termination status"), ("tree", "dump the LD/LDNF tree")):
        sub = commands.add_parser(name, parents=[common, budget], help=description)
        sub.add_argument("file")
        sub.add_argument("-q", "--query", required=True)

    encode = commands.add_parser("encode", parents=[common], help="encode a program for meta-interpreters")
    encode.add_argument("file")
    encode.add_argument("--kind", default="ce", help="ce, ced:K or ground")

    for name, description in (("meta", "run a query through a meta-interpreter"),
                              ("compare", "compare object and meta termination")):
        sub = commands.add_parser(name, parents=[common, budget], help=description)
        sub.add_argument("file")
        interp = sub.add_mutually_exclusive_group(required=True)
        interp.add_argument("--interp", choices=interpreter_names())
        interp.add_argument("--interp-file", metavar="PATH", help="interpreter program file")
        sub.add_argument("-q", "--query", required=True)
        sub.add_argument("--extra", default=FRESH, help="'fresh' or comma-separated extra solve arguments")

    classify = commands.add_parser("classify", parents=[common], help="classify a meta-interpreter")
    classify.add_argument("file", nargs="?")
    classify.add_argument("--interp", choices=interpreter_names())
    classify.add_argument("--non-failing", nargs="*", default=[], metavar="NAME/ARITY",
                          help="predicates to treat as non-failing")

    commands.add_parser("interpreters", parents=[common], help="list the interpreter catalog")

    analyze = commands.add_parser("analyze", parents=[common, budget], help="search or check a termination ordering")
    analyze.add_argument("file")
    analyze.add_argument("-q", "--query", action="append", required=True, dest="seeds",
                         help="seed query; repeat for several seeds")
    analyze.add_argument("--strategy", default="linear:3", help="linear:BOUND or rpo")
    analyze.add_argument("--given-mapping", metavar="FILE", help="check this ordering instead of searching")
    analyze.add_argument("--interp", choices=interpreter_names(), help="analyse the composed meta-program")
    analyze.add_argument("--node-limit", type=int, help="search nodes before giving up")
    analyze.add_argument("--answered", action="store_true",
                         help="take obligations under the bindings of successful branches")

    semantics = commands.add_parser("semantics", parents=[common, budget], help="non-ground consequence operator")
    semantics.add_argument("file")
    semantics.add_argument("--powers", type=int, help="apply exactly N times instead of iterating to stability")
    semantics.add_argument("--answers", action="store_true", help="also compare with computed answers")

    corpus = commands.add_parser("corpus", parents=[common, budget], help="run a preservation corpus")
    corpus.add_argument("--suite", default="all", choices=["all"] + suite_names())
    corpus.add_argument("--workers", type=int)
    corpus.add_argument("--csv", metavar="PATH", help="also write the summary table as CSV")
    return parser


def _dispatch(args: argparse.Namespace, config: MetaTerminationConfig) -> Dict[str, Any]:
    programs, interpreters, analysis = ProgramTool(config), InterpreterTool(config), AnalysisTool(config)
    limits = {"max_nodes": getattr(args, "budget", None), "max_depth": getattr(args, "depth", None)}
    command = args.command
    if command == "check":
        return programs.check_report(args.file)
    if command == "run":
        return programs.run_report(args.file, args.query, **limits)
    if command == "tree":
        return programs.tree_report(args.file, args.query, **limits)
    if command == "encode":
        return programs.encode_report(args.file, args.kind)
    if command == "meta":
        return interpreters.meta_report(args.file, args.interp, args.query, args.extra,
                                        interpreter_path=args.interp_file, **limits)
    if command == "compare":
        return interpreters.compare_report(args.file, args.interp, args.query, args.extra,
                                           interpreter_path=args.interp_file, **limits)
    if command == "classify":
        if not args.file and not args.interp:
            raise UsageError("classify needs a FILE or --interp NAME")
        return interpreters.classify_report(args.interp, args.file, args.non_failing)
    if command == "interpreters":
        return interpreters.catalog_report()
    if command == "analyze":
        return analysis.analyze_report(args.file, args.seeds, args.strategy, args.interp, args.given_mapping,
                                       node_limit=args.node_limit, answered=args.answered, **limits)
    if command == "semantics":
        return analysis.semantics_report(args.file, args.powers, args.answers, **limits)
    if command == "corpus":
        return interpreters.corpus_report(args.suite, workers=args.workers, **limits)
    raise UsageError("a command is required")


def _lines(values: Sequence[str], empty: str = "(none)") -> List[str]:
    return list(values) if values else [empty]


def _render_run(result: Dict[str, Any]) -> List[str]:
    status = result["status"]
    lines = [f"status: {status['kind']} ({status['node_count']} nodes)"]
    if status.get("witness"):
        lines.append("loop: " + " -> ".join(status["witness"]))
    lines.append("answers:")
    lines.extend(f"  {answer}" for answer in _lines(result["answers"]))
    if result.get("floundered"):
        lines.append("floundered: yes")
    return lines


def _render_compare(result: Dict[str, Any]) -> List[str]:
    answers = result["answer_check"]
    lines = [
        f"object: {result['object_query']} -> {result['object_status']['kind']}",
        f"meta:   {result['meta_query']} -> {result['meta_status']['kind']}",
        f"answers: sound {answers['sound']}, complete {answers['complete']}",
    ]
    if result.get("call_check"):
        lines.append(f"calls: {result['call_check']['mode']} {result['call_check']['verdict']}")
    if result.get("restricted_query") is not None:
        note = f" ({result['restriction_note']})" if result["restriction_note"] else ""
        lines.append(f"restricted query: {'yes' if result['restricted_query'] else 'no'}{note}")
    lines.append(f"claim: {result['claim'] or 'none'}")
    lines.append(f"verdict: {result['verdict']}")
    return lines


def _render_analyze(result: Dict[str, Any]) -> List[str]:
    lines = [f"obligations: {len(result['obligations'])} (complete: {result['complete']})"]
    lines.extend(f"  {o}" for o in result["obligations"])
    if result["mode"] == "check":
        lines.append(f"check: {result['check']['verdict']}")
        lines.extend(f"  violated: {v['obligation']}: {v['explanation']}" for v in result["check"]["violations"])
    elif result["found"]:
        lines.append("found: " + json.dumps(result["search"]["ordering"]))
    else:
        lines.append(result["search"]["message"])
    return lines


_RENDERERS: Dict[str, Callable[[Dict[str, Any]], List[str]]] = {
    "check": lambda r: [r["text"].rstrip()] if "text" in r else [
        f"{name}: {entry.get('error') or str(entry['clauses']) + ' clauses'}" for name, entry in r["programs"].items()
    ],
    "run": _render_run,
    "meta": _render_run,
    "tree": lambda r: [r["dump"]],
    "encode": lambda r: r["clauses"],
    "compare": _render_compare,
    "analyze": _render_analyze,
    "semantics": lambda r: [f"powers: {r['powers']}, atoms: {r['size']}, stable: {r['stable']}"] + r["atoms"],
    "corpus": lambda r: [pd.DataFrame(r["rows"], columns=CORPUS_COLUMNS).to_string(index=False)],
}


def render(report: Dict[str, Any]) -> str:
    """Human-readable text for a report; commands without a renderer print their result as JSON."""
    renderer = _RENDERERS.get(report["command"])
    if renderer is None:
        return json.dumps(report["result"], indent=2)
    lines = renderer(report["result"])
    if report.get("truncated"):
        lines.append("(budget reached: results are partial)")
    return "\n".join(lines)


def exit_code_for(report: Dict[str, Any]) -> int:
    result = report["result"]
    if result.get("counterexample") or result.get("claim_violations"):
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run one command.

    Returns:
        0 on success, 1 usage, 2 parse error, 3 precondition violation, 4 counterexample
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a command is required")
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return EXIT_USAGE

    try:
        config = MetaTerminationConfig.load_from_env()
    except ValueError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    levels = {0: logging.WARNING, 1: getattr(logging, config.log_level, logging.INFO)}
    setup_logging(levels.get(args.verbose, logging.DEBUG))

    try:
        report = _dispatch(args, config)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except PRECONDITION_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE

    print(render(report))
    if args.json:
        write_json_report(report, args.json)
    if args.command == "corpus" and args.csv:
        write_frame_csv(pd.DataFrame(report["result"]["rows"], columns=CORPUS_COLUMNS), args.csv)
    code = exit_code_for(report)
    logger.info(f"{args.command} finished with exit code {code}")
    return code
