#!/usr/bin/env python3
"""
MBS Checker - Main Entry Point

Command-line model checker for Minkowskian branching structures: validates
model presentations, runs the funny-business detectors and writes
certificates, verdict tables and SVG diagrams.

Usage:
    python main.py VERB [MODEL] [--catalog NAME] [options]
    python main.py catalog list|gen|check [options]

Exit codes:
    0   verdict computed (whatever it is)
    1   invalid input
    2   construct outside the decided fragment, or a failed exact surrogate
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

# Add project root to path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))

from config.settings import *
from core.errors import (
    CatalogLookupError, DomainError, GenerationError, ModelParseError, UnknownScenarioError,
    UnsupportedError
)
from core.report_writer import format_certificate
from cli.controllers.main_controller import CommandResult, MainController, parse_params

SUBJECT_VERBS = ["validate", "order", "slr", "choice-points", "possibilities", "finfb", "inffb",
                 "cfb", "epsfb", "postulate-a", "postulate-b", "locate", "mingap", "fin2inf",
                 "loci", "chain", "plot"]


class MbsCheckerApp:
    """Main application class."""

    def __init__(self, log_level: str = LOG_LEVEL):
        """Initialize the application."""
        self.controller = None

        # Setup logging
        self.setup_logging(log_level)
        self.logger = logging.getLogger(__name__)

    def setup_logging(self, log_level: str = LOG_LEVEL):
        """Configure application logging; stdout is left to certificates."""
        # Ensure log directory exists
        LOG_DIR.mkdir(exist_ok=True)

        # Set log file rotation if needed
        if LOG_FILE.exists() and LOG_FILE.stat().st_size > MAX_LOG_SIZE:
            # Simple log rotation - keep last backup
            backup_file = LOG_FILE.with_suffix('.log.bak')
            if backup_file.exists():
                backup_file.unlink()
            LOG_FILE.rename(backup_file)

        logging.basicConfig(
            level=getattr(logging, log_level.upper(), logging.INFO),
            format=LOG_FORMAT,
            handlers=[
                logging.FileHandler(LOG_FILE, encoding='utf-8'),
                logging.StreamHandler(sys.stderr)
            ]
        )

    def dispatch(self, args: argparse.Namespace) -> CommandResult:
        """Run the verb named on the command line."""
        self.controller = MainController()
        c = self.controller

        if args.verb == "catalog":
            if args.action == "list":
                return c.catalog_list()
            if args.action == "gen":
                return c.catalog_gen(args.name, parse_params(args.param), args.output)
            return c.catalog_check(args.names, args.xlsx)

        instance = c.load_instance(args.model, args.catalog, args.family, parse_params(args.param))
        verbs = {
            "validate": lambda: c.validate(instance),
            "order": lambda: c.order(instance, args.a, args.b),
            "slr": lambda: c.slr(instance, args.a, args.b),
            "choice-points": lambda: c.choice_points(instance, args.pair[0], args.pair[1], args.at),
            "possibilities": lambda: c.possibilities(instance, args.at),
            "finfb": lambda: c.finfb(instance, args.f, args.jobs, not args.no_prune),
            "inffb": lambda: c.inffb(instance, args.f),
            "cfb": lambda: c.cfb(instance, args.f),
            "epsfb": lambda: c.epsfb(instance, args.f, args.delta),
            "postulate-a": lambda: c.postulate_a(instance, args.f, args.delta),
            "postulate-b": lambda: c.postulate_b(instance, args.f),
            "locate": lambda: c.locate(instance, args.f, args.at, args.delta),
            "mingap": lambda: c.mingap(instance, args.f, args.delta),
            "fin2inf": lambda: c.fin2inf(instance, args.f),
            "loci": lambda: c.loci(instance, args.f, args.point),
            "chain": lambda: c.chain(instance, args.chain),
            "plot": lambda: c.plot(instance, args.output),
        }
        return verbs[args.verb]()

    def cleanup(self):
        """Perform cleanup operations."""
        if self.controller:
            self.controller.shutdown()


def build_parser() -> argparse.ArgumentParser:
    """Command line of every verb."""
    parser = argparse.ArgumentParser(
        prog="mbs-checker",
        description=f"{APP_NAME} - {APP_DESCRIPTION}",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"""
Examples:
    python main.py finfb --catalog epr-bohm --f "+,+"
    python main.py inffb --catalog m2 --family finitely-many-zeros --f zeros
    python main.py validate my_model.json
    python main.py catalog check --xlsx verdicts.xlsx

Version: {APP_VERSION}
"""
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} v{APP_VERSION}")
    parser.add_argument("--log-level", default=LOG_LEVEL, help="Logging level (default: %(default)s)")
    verbs = parser.add_subparsers(dest="verb", required=True)

    subject = argparse.ArgumentParser(add_help=False)
    subject.add_argument("model", nargs="?", help="Model file (JSON)")
    subject.add_argument("--catalog", help="Catalog entry instead of a model file")
    subject.add_argument("--family", help="Scenario family, e.g. finitely-many-zeros or all-strings(8)")
    subject.add_argument("--param", action="append", default=[], help="Catalog parameter k=v")

    rule = argparse.ArgumentParser(add_help=False)
    rule.add_argument("--f", help="Transition set or outcome rule")

    deltas = argparse.ArgumentParser(add_help=False)
    deltas.add_argument("--delta", action="append", help="Neighbourhood radius p/q (repeatable)")

    def verb(name: str, help_text: str, *parents) -> argparse.ArgumentParser:
        return verbs.add_parser(name, help=help_text, parents=[subject, *parents])

    verb("validate", "Check the presentation conditions of a model")
    for name, text in (("order", "Compare two events"), ("slr", "Space-like relatedness of two events")):
        p = verb(name, text)
        p.add_argument("--a", required=True, help="Event POINT@SCENARIO")
        p.add_argument("--b", required=True, help="Event POINT@SCENARIO")
    p = verb("choice-points", "Generated choice points of a scenario pair")
    p.add_argument("--pair", nargs=2, required=True, metavar=("SIGMA", "ETA"))
    p.add_argument("--at", help="Also test the event at this location")
    p = verb("possibilities", "Elementary possibilities at an event")
    p.add_argument("--at", required=True, help="Event POINT@SCENARIO")
    p = verb("finfb", "Finitary funny business", rule)
    p.add_argument("--jobs", type=int, default=DEFAULT_JOBS, help="Parallel search workers")
    p.add_argument("--no-prune", action="store_true", help="Disable monotone pruning")
    verb("inffb", "Infinitary funny business", rule)
    verb("cfb", "Combinatorial funny business", rule)
    verb("epsfb", "Epsilon funny business", rule, deltas)
    verb("postulate-a", "Postulate A", rule, deltas)
    verb("postulate-b", "Postulate B on the X set or a transition set's points", rule)
    p = verb("locate", "Cone boundary above a reduced-set point", rule, deltas)
    p.add_argument("--at", help="Reduced-set point to start from")
    p = verb("mingap", "Minimum-gap certificate against infinitary funny business", rule)
    p.add_argument("--delta", help="Time shift p/q")
    verb("fin2inf", "Build a case of INFFB from a case of FINFB", rule)
    p = verb("loci", "Cause-like loci of a point", rule)
    p.add_argument("--point", required=True, help="Point id of the transition set's structure")
    p = verb("chain", "Chain compactness witness")
    p.add_argument("--chain", required=True, help="Chain name")
    p = verb("plot", "SVG diagram of a 2D-embedded model")
    p.add_argument("--output", help="SVG file (default: stdout)")

    cat = verbs.add_parser("catalog", help="Catalog of structures")
    actions = cat.add_subparsers(dest="action", required=True)
    actions.add_parser("list", help="List catalog entries")
    p = actions.add_parser("gen", help="Write a catalog model document")
    p.add_argument("name")
    p.add_argument("--param", action="append", default=[], help="Generator parameter k=v")
    p.add_argument("--output", help="Model file (default: stdout)")
    p = actions.add_parser("check", help="Reproduce the expected verdicts")
    p.add_argument("names", nargs="*")
    p.add_argument("--xlsx", help="Also export the verdict table as a spreadsheet")
    return parser


def emit(result: CommandResult):
    """Write a result to stdout."""
    if result.document is not None:
        sys.stdout.write(result.document)
        return
    if result.table is not None:
        print(result.table.to_string(index=False))
    print(format_certificate(result.certificate, result.summary))


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command; returns the exit code."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INVALID_INPUT

    app = MbsCheckerApp(args.log_level)
    try:
        emit(app.dispatch(args))
        return EXIT_OK
    except UnsupportedError as e:
        app.logger.warning(f"Unsupported: {str(e)}")
        print(f"{ERROR_MESSAGES['unsupported']} {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except GenerationError as e:
        app.logger.error(f"Generation failed: {str(e)}")
        print(f"{ERROR_MESSAGES['generation_failed']} {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ModelParseError as e:
        print(f"{ERROR_MESSAGES['parse_error']} {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except CatalogLookupError as e:
        print(f"{ERROR_MESSAGES['unknown_catalog']} {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except FileNotFoundError as e:
        print(f"{ERROR_MESSAGES['file_not_found']} {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (DomainError, UnknownScenarioError, ValueError, LookupError) as e:
        app.logger.error(f"Invalid input: {str(e)}")
        print(f"{ERROR_MESSAGES['invalid_input']} {e}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    finally:
        app.cleanup()


def main():
    """Main application entry point."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
