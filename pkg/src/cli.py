import argparse
import json
import logging
import sys
from dataclasses import dataclass
from difflib import get_close_matches
from fractions import Fraction
from html import escape
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from prompt_toolkit import print_formatted_text
from prompt_toolkit.formatted_text import HTML
from prompt_toolkit.styles import Style

from src.algebra.cyclotomic import CyclotomicError, RootOfUnity
from src.boundary.pretzel import longitude_obstruction, pretzel_scan
from src.errors import KnotObsError
from src.groups.foxcalc import load_presentation
from src.helpers import format_rows, format_turn, print_h_bar, to_csv
from src.library import PRINTED_FORMS, BUILTIN_MATRICES, export_builtins, list_matrices, resolve_matrix
from src.models.signature_report import HyperbolicVerdict, SignatureEvaluation
from src.seifert.check import check_form
from src.seifert.forms import X, alexander_polynomial, reverse_sum
from src.settings import OUTPUT_FORMATS, Settings, load_settings
from src.signature.hermitian import (
    EXACT,
    NUMERIC,
    UncertifiableSignError,
    characteristic_polynomial,
    hermitian_matrix,
)
from src.signature.levine_tristram import ds_bound_report, signature_at, signature_numeric, signature_profile

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(message)s')
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DISAGREEMENT = 1
EXIT_USAGE = 2

TextLines = List[Tuple[str, str]]


class OutputError(KnotObsError):
    """Raised when a report cannot be written"""
    pass


@dataclass
class Command:
    """Dataclass to represent a CLI command"""
    name: str
    description: str
    tips: List[str]
    handler: Callable
    aliases: List[str] = None

    def __post_init__(self):
        if self.aliases is None:
            self.aliases = []


class KnotObsCLI:
    def __init__(self):
        self.settings: Optional[Settings] = None

        # Initialize command registry
        self._initialize_commands()

        self.style = Style.from_dict({
            'command': 'ansigreen',
            'error': 'ansired bold',
            'success': 'ansigreen bold',
            'warning': 'ansiyellow',
            'value': 'ansicyan bold',
        })

    def _initialize_commands(self) -> None:
        """Initialize all CLI commands"""
        self.commands: Dict[str, Command] = {}

        self._register_command(
            Command(
                name="help",
                description="Displays a list of all available commands, or help for a specific command.",
                tips=["Try 'help' to see available commands.",
                      "Try 'help {command}' to get more information about a specific command."],
                handler=self.help,
                aliases=['h', '?']
            )
        )

        ################## BOUNDARY LINKS ##################
        self._register_command(
            Command(
                name="pretzel-scan",
                description="Runs the Fox-calculus boundary test on a grid of pretzel links.",
                tips=["Format: pretzel-scan {p_max} {n_max}  (or --p-max P --n-max N)",
                      "Rows compare the pipeline verdict with the closed form 'n not a multiple of 2(2p+1)'.",
                      "Use --workers N to spread the grid over N processes.",
                      "Exit status 1 means some row disagrees."],
                handler=self.pretzel_scan,
                aliases=['pretzel', 'scan']
            )
        )

        self._register_command(
            Command(
                name="fox",
                description="Runs the longitude test on a presentation file.",
                tips=["Format: fox {presentation.json}",
                      "See presentations/pretzel_1_1.json for the file layout."],
                handler=self.fox,
                aliases=['longitude']
            )
        )

        ################## SEIFERT FORMS ##################
        self._register_command(
            Command(
                name="form-check",
                description="Builds the Seifert form, checks its axioms, and searches for metabolic and hyperbolic structure.",
                tips=["Format: form-check {matrix} [{epsilon}]",
                      "Use --bound B to widen the metabolizer search.",
                      "Use --reverse-sum to check diag(psi, psi^T), the form of K # K^r."],
                handler=self.form_check,
                aliases=['form', 'check']
            )
        )

        self._register_command(
            Command(
                name="alexander",
                description="Prints det(psi - x psi^T).",
                tips=["Format: alexander {matrix}"],
                handler=self.alexander,
                aliases=['delta']
            )
        )

        ################## SIGNATURES ##################
        self._register_command(
            Command(
                name="signature",
                description="Evaluates the Levine-Tristram signature at a root of unity.",
                tips=["Format: signature {matrix} {k/m}",
                      "Use --numeric --precision N for floating-point evaluation at any angle.",
                      "JSON output includes the characteristic polynomial in exact mode."],
                handler=self.signature,
                aliases=['sig']
            )
        )

        self._register_command(
            Command(
                name="profile",
                description="Computes the piecewise-constant signature function on the circle.",
                tips=["Format: profile {matrix}",
                      "Use --resolution R to treat cyclotomic factors up to order R exactly.",
                      "CSV output is meant for plotting elsewhere."],
                handler=self.profile,
                aliases=['signature-profile']
            )
        )

        self._register_command(
            Command(
                name="ds-bound",
                description="Lower bound for the doubly slice genus of the Bing double.",
                tips=["Format: ds-bound {matrix}",
                      "Use 8_20#8_20 for connected sums.",
                      "Use --test-set 1/6,1/3 to restrict the points tested."],
                handler=self.ds_bound,
                aliases=['ds', 'bing']
            )
        )

        ################## MATRICES ##################
        self._register_command(
            Command(
                name="list-matrices",
                description="Lists the built-in matrices and those in the matrix directory.",
                tips=["Set KNOTOBS_MATRIX_DIR or --matrix-dir to add a directory of matrix files."],
                handler=self.list_matrices,
                aliases=['matrices', 'ls']
            )
        )

        self._register_command(
            Command(
                name="export-matrices",
                description="Writes the built-in matrices as JSON files.",
                tips=["Format: export-matrices [{directory}]"],
                handler=self.export_matrices,
                aliases=['export']
            )
        )

    ###################
    # Helper Functions
    ###################
    def _register_command(self, command: Command) -> None:
        """Register a command and its aliases"""
        self.commands[command.name] = command
        for alias in command.aliases:
            self.commands[alias] = command

    def _say(self, style_class: str, text: str) -> None:
        if style_class:
            print_formatted_text(HTML(f"<{style_class}>{escape(text)}</{style_class}>"), style=self.style)
        else:
            print_formatted_text(text, style=self.style)

    def _common_parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--format", choices=OUTPUT_FORMATS, help="report format (default from settings)")
        common.add_argument("--out", type=Path, help="write the report to this file")
        common.add_argument("--config", type=Path, help="settings file (default config/general.json)")
        common.add_argument("--matrix-dir", type=Path, help="directory searched for matrix files")
        common.add_argument("--verbose", "-v", action="store_true", help="debug logging")
        return common

    def _parser(self, command: str, description: str) -> argparse.ArgumentParser:
        return argparse.ArgumentParser(prog=f"knotobs {command}", description=description,
                                       parents=[self._common_parser()])

    @staticmethod
    def _add_signature_options(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--test-set", default="auto", help="'auto' or comma-separated k/m values")
        parser.add_argument("--resolution", type=int, help="largest cyclotomic order treated exactly")

    def _configure(self, args: argparse.Namespace, **overrides) -> Settings:
        if args.verbose:
            logging.getLogger().setLevel(logging.DEBUG)
        overrides.update({"output_format": args.format, "matrix_dir": args.matrix_dir})
        if getattr(args, "resolution", None) is not None:
            overrides["profile_resolution"] = args.resolution
        self.settings = load_settings(args.config, overrides)
        return self.settings

    @staticmethod
    def _test_set(spec: str) -> Optional[List[RootOfUnity]]:
        if spec.strip().lower() == "auto":
            return None
        return [RootOfUnity.parse(item) for item in spec.split(",") if item.strip()]

    def _emit(self, args: argparse.Namespace, payload, records: List[Dict], fields: List[str],
              lines: TextLines) -> None:
        """Print or write one report in the configured format"""
        fmt = self.settings.output_format
        if fmt == "json":
            body = json.dumps(payload, indent=2) + "\n"
        elif fmt == "csv":
            body = to_csv(records, fields)
        else:
            body = None

        if args.out is not None:
            content = body if body is not None else "\n".join(text for _, text in lines) + "\n"
            try:
                args.out.parent.mkdir(parents=True, exist_ok=True)
                args.out.write_text(content)
            except OSError as e:
                raise OutputError(f"Cannot write {args.out}: {e}")
            self._say("success", f"Wrote {fmt} report to {args.out}")
        elif body is not None:
            sys.stdout.write(body)
        else:
            for style_class, text in lines:
                self._say(style_class, text)

    def _handle_unknown_command(self, command: str) -> int:
        """Handle unknown command with suggestions"""
        logger.warning(f"Unknown command: '{command}'")

        suggestions = self._get_command_suggestions(command)
        if suggestions:
            logger.info("Did you mean one of these?")
            for suggestion in suggestions:
                logger.info(f"  - {suggestion}")
        logger.info("Use 'help' to see all available commands.")
        return EXIT_USAGE

    def _get_command_suggestions(self, command: str, max_suggestions: int = 3) -> List[str]:
        """Get command suggestions based on string similarity"""
        return get_close_matches(command, self.commands.keys(), n=max_suggestions, cutoff=0.6)

    def _show_command_help(self, command_name: str) -> bool:
        """Show help for a specific command; False if there is no such command"""
        command = self.commands.get(command_name)
        if not command:
            logger.warning(f"Unknown command: '{command_name}'")
            suggestions = self._get_command_suggestions(command_name)
            if suggestions:
                logger.info("Did you mean one of these?")
                for suggestion in suggestions:
                    logger.info(f"  - {suggestion}")
            return False

        logger.info(f"\nHelp for '{command.name}':")
        logger.info(f"Description: {command.description}")

        if command.aliases:
            logger.info(f"Aliases: {', '.join(command.aliases)}")

        if command.tips:
            logger.info("\nTips:")
            for tip in command.tips:
                logger.info(f"  - {tip}")
        return True

    def _show_general_help(self) -> None:
        """Show general help information"""
        logger.info("\nAvailable Commands:")
        commands_by_letter = {}
        for cmd_name, cmd in self.commands.items():
            # Only show main commands, not aliases
            if cmd_name == cmd.name:
                commands_by_letter.setdefault(cmd_name[0].upper(), []).append(cmd)

        for letter in sorted(commands_by_letter.keys()):
            logger.info(f"\n{letter}:")
            for cmd in sorted(commands_by_letter[letter], key=lambda x: x.name):
                logger.info(f"  {cmd.name:<15} - {cmd.description}")
        logger.info("\nRun 'knotobs {command} --help' for its options.")

    ######################
    # Command functions
    ######################
    def help(self, argv: List[str]) -> int:
        """List of commands and their descriptions"""
        if not argv:
            self._show_general_help()
            return EXIT_OK
        return EXIT_OK if self._show_command_help(argv[0]) else EXIT_USAGE

    def pretzel_scan(self, argv: List[str]) -> int:
        parser = self._parser("pretzel-scan", "Boundary-link test on pretzel links P(2p+1, 2n, -2n, -2p-1)")
        parser.add_argument("p_max", nargs="?", type=int)
        parser.add_argument("n_max", nargs="?", type=int)
        parser.add_argument("--p-max", dest="p_max_flag", type=int, help="same as the first positional")
        parser.add_argument("--n-max", dest="n_max_flag", type=int, help="same as the second positional")
        parser.add_argument("--workers", type=int, default=1, help="process pool size")
        args = parser.parse_args(argv)
        p_max = args.p_max_flag if args.p_max_flag is not None else args.p_max
        n_max = args.n_max_flag if args.n_max_flag is not None else args.n_max
        if p_max is None or n_max is None:
            parser.error("both p_max and n_max are required")
        self._configure(args)

        rows = pretzel_scan(p_max, n_max, workers=args.workers)
        records = [row.to_dict() for row in rows]
        lines: TextLines = [("", f"{'p':>3} {'n':>4}  {'pipeline':<13} {'closed form':<13} agree")]
        for row in rows:
            closed = "Obstructed" if row.closed_form_obstructed else "Inconclusive"
            lines.append(("" if row.agrees else "error",
                          f"{row.p:>3} {row.n:>4}  {row.verdict.value:<13} {closed:<13} {str(row.agrees).lower()}"))
        disagreements = sum(not row.agrees for row in rows)
        lines.append(("error", f"{disagreements} disagreements") if disagreements
                     else ("success", f"All {len(rows)} rows agree"))
        self._emit(args, records, records, ["p", "n", "verdict", "closed_form_obstructed", "agrees"], lines)
        return EXIT_DISAGREEMENT if disagreements else EXIT_OK

    def fox(self, argv: List[str]) -> int:
        parser = self._parser("fox", "Longitude test on a presentation file")
        parser.add_argument("presentation", type=Path)
        args = parser.parse_args(argv)
        self._configure(args)

        report = longitude_obstruction(load_presentation(args.presentation))
        payload = report.to_dict()
        lines: TextLines = [
            ("", f"Presentation: {report.source}"),
            ("", f"d{report.generator}(longitude) = {report.target}"),
            ("", f"gcd of relator derivatives = {report.witness.gcd}"),
            ("", f"remainder = {report.witness.remainder}"),
            ("value", f"Verdict: {report.verdict.value}"),
        ]
        record = {**payload, "gcd": str(report.witness.gcd), "remainder": str(report.witness.remainder)}
        self._emit(args, payload, [record], ["source", "generator", "verdict", "target", "gcd", "remainder"], lines)
        return EXIT_OK

    def form_check(self, argv: List[str]) -> int:
        parser = self._parser("form-check", "Seifert form axioms, metabolizer search and hyperbolic obstruction")
        parser.add_argument("matrix")
        parser.add_argument("epsilon", nargs="?", type=int, choices=[-1, 1])
        parser.add_argument("--bound", type=int, help="coefficient bound of the metabolizer search")
        parser.add_argument("--reverse-sum", action="store_true", help="check diag(psi, psi^T) instead")
        self._add_signature_options(parser)
        args = parser.parse_args(argv)
        settings = self._configure(args, search_bound=args.bound)

        m = resolve_matrix(args.matrix, settings.matrix_dir, args.epsilon)
        printed = None
        if m.name in PRINTED_FORMS and m.epsilon == BUILTIN_MATRICES[m.name]["epsilon"]:
            printed = PRINTED_FORMS[m.name]
        if args.reverse_sum:
            m, printed = reverse_sum(m), None
        report = check_form(m, settings.search_bound, self._test_set(args.test_set),
                            settings.profile_resolution, settings.max_search_rank, printed)

        lines: TextLines = [("", f"Seifert form of {m} (epsilon {m.epsilon:+d}, rank {m.size})")]
        if not report.unimodular:
            lines.append(("error", f"NonUnimodular: det(psi + epsilon psi^T) = {report.determinant}"))
        else:
            for axiom, ok in report.axioms.items():
                lines.append(("success" if ok else "error", f"  {axiom:<18} {'pass' if ok else 'FAIL'}"))
            lines.append(("", "b ="))
            lines += [("", row) for row in format_rows(report.b)]
            lines.append(("", "t ="))
            lines += [("", row) for row in format_rows(report.t)]
            if report.printed_match is not None:
                lines.append(("success" if report.printed_match else "error",
                              f"Published b and t {'match' if report.printed_match else 'DIFFER'}"))
            if report.search_skipped:
                lines.append(("warning", f"Metabolizer search skipped (rank {m.size} > {settings.max_search_rank})"))
            elif report.metabolizer is not None:
                lines.append(("value", f"Metabolizer: {report.metabolizer}"))
            else:
                lines.append(("warning", f"No metabolizer with entries in [-{report.search_bound}, {report.search_bound}]"))
            certificate = report.hyperbolic
            if certificate.verdict == HyperbolicVerdict.VIOLATED:
                omega, value = certificate.witness
                lines.append(("value", f"Hyperbolic: Violated at {omega} (signature {value})"))
            else:
                lines.append(("value", f"Hyperbolic: signature vanishes on {len(certificate.tested_points)} test points"))
            if report.metabolic_not_hyperbolic:
                lines.append(("success", "Metabolic but not hyperbolic"))

        payload = report.to_dict()
        record = {
            "name": report.name,
            "epsilon": report.epsilon,
            "rank": report.rank,
            "determinant": report.determinant,
            "axioms_pass": bool(report.axioms) and all(report.axioms.values()),
            "printed_match": report.printed_match,
            "metabolizer": "" if report.metabolizer is None else str(report.metabolizer),
            "hyperbolic": "" if report.hyperbolic is None else report.hyperbolic.verdict.value,
            "passed": report.passed,
        }
        self._emit(args, payload, [record], list(record), lines)
        return EXIT_OK if report.passed else EXIT_DISAGREEMENT

    def alexander(self, argv: List[str]) -> int:
        parser = self._parser("alexander", "det(psi - x psi^T)")
        parser.add_argument("matrix")
        args = parser.parse_args(argv)
        settings = self._configure(args)

        m = resolve_matrix(args.matrix, settings.matrix_dir)
        delta = alexander_polynomial(m)
        factored = " * ".join(f"({factor.as_expr()})" + (f"^{k}" if k > 1 else "")
                              for factor, k in delta.factor_list()[1])
        payload = {
            "name": m.name,
            "polynomial": str(delta.as_expr()),
            "coefficients": [int(c) for c in delta.all_coeffs()],
            "factored": factored or str(delta.as_expr()),
        }
        lines: TextLines = [("", f"Delta_{m}({X}) = {payload['polynomial']}"),
                            ("", f"           = {payload['factored']}")]
        self._emit(args, payload, [{**payload, "coefficients": " ".join(map(str, payload["coefficients"]))}],
                   ["name", "polynomial", "factored", "coefficients"], lines)
        return EXIT_OK

    def signature(self, argv: List[str]) -> int:
        parser = self._parser("signature", "Levine-Tristram signature at one point")
        parser.add_argument("matrix")
        parser.add_argument("omega", help="k/m for w = e^{2 pi i k/m}; numeric mode also accepts decimals")
        mode = parser.add_mutually_exclusive_group()
        mode.add_argument("--exact", dest="mode", action="store_const", const=EXACT)
        mode.add_argument("--numeric", dest="mode", action="store_const", const=NUMERIC)
        parser.add_argument("--precision", type=int, help="decimal digits in numeric mode")
        args = parser.parse_args(argv)
        settings = self._configure(args, numeric_precision=args.precision)

        m = resolve_matrix(args.matrix, settings.matrix_dir)
        if args.mode == NUMERIC:
            try:
                turn = Fraction(args.omega)
            except ValueError:
                raise CyclotomicError(f"Expected a fraction of a turn, got {args.omega!r}")
            value = signature_numeric(m, turn, settings.numeric_precision)
            result = SignatureEvaluation(m.name, format_turn(turn), NUMERIC, value,
                                         precision=settings.numeric_precision)
        else:
            omega = RootOfUnity.parse(args.omega)
            value = signature_at(m, omega)
            result = SignatureEvaluation(m.name, str(omega), EXACT, value)
            if settings.output_format == "json":
                coefficients = characteristic_polynomial(hermitian_matrix(m.psi, omega))
                result.characteristic_polynomial = [str(c) for c in coefficients]

        lines: TextLines = [("value", f"sigma_{m}({result.omega}) = {result.value}")]
        payload = result.to_dict()
        self._emit(args, payload, [payload], ["name", "omega", "mode", "signature"], lines)
        return EXIT_OK

    def profile(self, argv: List[str]) -> int:
        parser = self._parser("profile", "Signature function on the unit circle")
        parser.add_argument("matrix")
        parser.add_argument("--resolution", type=int, help="largest cyclotomic order treated exactly")
        args = parser.parse_args(argv)
        settings = self._configure(args)

        m = resolve_matrix(args.matrix, settings.matrix_dir)
        result = signature_profile(m, settings.profile_resolution)
        records, lines = [], [("", f"Signature profile of {m}")]
        values = {point: value for point, value in result.point_values}
        for arc in result.arcs:
            records.append({"kind": "arc", "start": format_turn(arc.start), "end": format_turn(arc.end),
                            "value": arc.value, "sample": str(arc.sample)})
            lines.append(("", f"  ({format_turn(arc.start)}, {format_turn(arc.end)})  {arc.value:+d}"))
            end = RootOfUnity.from_turn(arc.end) if arc.end < 1 else None
            if end in values:
                records.append({"kind": "point", "start": str(end), "end": str(end),
                                "value": values[end], "sample": str(end)})
                lines.append(("value", f"  at {end}  {values[end]:+d}"))
        for jump in result.approximate_jumps:
            lines.append(("warning", f"  approximate jump near turn {jump:.12f}"))
        self._emit(args, result.to_dict(), records, ["kind", "start", "end", "value", "sample"], lines)
        return EXIT_OK

    def ds_bound(self, argv: List[str]) -> int:
        parser = self._parser("ds-bound", "Doubly slice genus bound for the Bing double")
        parser.add_argument("matrix")
        self._add_signature_options(parser)
        args = parser.parse_args(argv)
        settings = self._configure(args)

        m = resolve_matrix(args.matrix, settings.matrix_dir)
        result = ds_bound_report(m, self._test_set(args.test_set), settings.profile_resolution)
        where = f" at {result.witness} (signature {result.signature})" if result.witness else ""
        lines: TextLines = [("value", f"g_ds(B({m})) >= {result.bound}{where}"),
                            ("", f"Tested {len(result.tested_points)} points; {result.NOTE}")]
        payload = result.to_dict()
        record = {**payload, "witness": payload["witness"] or ""}
        self._emit(args, payload, [record], ["name", "bound", "witness", "signature"], lines)
        return EXIT_OK

    def list_matrices(self, argv: List[str]) -> int:
        parser = self._parser("list-matrices", "Built-in and directory matrices")
        args = parser.parse_args(argv)
        settings = self._configure(args)

        records = [{"name": m.name, "epsilon": m.epsilon, "size": m.size, "admissible": m.is_admissible()}
                   for m in list_matrices(settings.matrix_dir)]
        lines: TextLines = [("", "Available matrices:")]
        lines += [("", f"- {r['name']:<16} {r['size']}x{r['size']}  epsilon {r['epsilon']:+d}"
                       + ("" if r["admissible"] else "  (not unimodular)")) for r in records]
        self._emit(args, records, records, ["name", "epsilon", "size", "admissible"], lines)
        return EXIT_OK

    def export_matrices(self, argv: List[str]) -> int:
        parser = self._parser("export-matrices", "Write the built-in table as JSON files")
        parser.add_argument("directory", nargs="?", type=Path, default=Path("matrices"))
        args = parser.parse_args(argv)
        self._configure(args)

        try:
            written = export_builtins(args.directory)
        except OSError as e:
            raise OutputError(f"Cannot write to {args.directory}: {e}")
        for path in written:
            self._say("success", f"Wrote {path}")
        return EXIT_OK

    ###################
    # Entry point
    ###################
    def main(self, argv: Optional[List[str]] = None) -> int:
        argv = sys.argv[1:] if argv is None else list(argv)
        if not argv:
            print_h_bar()
            self._show_general_help()
            return EXIT_USAGE

        command = self.commands.get(argv[0].lower())
        if command is None:
            return self._handle_unknown_command(argv[0])

        try:
            return command.handler(argv[1:])
        except SystemExit as e:
            # argparse: 0 after --help, 2 on bad arguments
            return e.code if isinstance(e.code, int) else EXIT_USAGE
        except UncertifiableSignError as e:
            logger.error(f"Uncertifiable: {e}")
            logger.info("Raise --precision or use --exact.")
            return EXIT_DISAGREEMENT
        except KnotObsError as e:
            logger.error(f"Error: {e}")
            return EXIT_USAGE


def main() -> None:
    sys.exit(KnotObsCLI().main())
