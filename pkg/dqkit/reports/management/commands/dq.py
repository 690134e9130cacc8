import json
import sys

from django.core.management.base import BaseCommand, CommandError, CommandParser

from reports.demos import DEMOS
from reports.export import export_xlsx
from reports.manifest import CRITERIA, RunManifest
from reports.runner import USAGE_ERROR, run
from scalars.exceptions import DQError

# option dest -> manifest field, for the flags a run is made of
MANIFEST_OPTIONS = (
    "expr",
    "series",
    "builtin",
    "derivative",
    "criterion",
    "variant",
    "mode",
    "pool",
    "seed",
    "count",
    "min_gap",
    "abs_tol",
    "rel_tol",
    "quad_tol",
    "max_subdivisions",
    "fd_step",
    "constant",
)


class UsageParser(CommandParser):
    """Argument errors exit with the usage status instead of argparse's 2."""

    def error(self, message):
        if self.called_from_command_line:
            self.print_usage(sys.stderr)
            self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")
        raise CommandError(f"Error: {message}", returncode=USAGE_ERROR)


def _pool(text):
    return [item.strip() for item in text.split(",") if item.strip()]


class Command(BaseCommand):
    help = 'Recognise difference quotients, recover f and verify the round trip'

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # unknown or missing subcommands are usage errors too
        parser.__class__ = UsageParser
        return parser

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(
            dest='command', required=True, parser_class=UsageParser
        )
        check = subparsers.add_parser('check', help='Run the selected criteria on H')
        recover = subparsers.add_parser('recover', help='Check H, recover f and verify DQ_f = H')
        verify = subparsers.add_parser('verify', help='Build DQ_f from f and check it')
        demo = subparsers.add_parser('demo', help='Run a built-in example with pinned settings')
        demo.add_argument('name', nargs='?', choices=sorted(DEMOS), help='Demo to run')

        for sub in (check, recover, verify):
            sub.add_argument('--expr', help='H(a, b) in the expression language (f(x) for verify)')
            sub.add_argument('--series', help='Coefficient file with "i j value" lines')
            sub.add_argument('--builtin', choices=sorted(DEMOS), help='Built-in H')
            sub.add_argument('--derivative', help="f'(x), enables the partials identity check")
            sub.add_argument('--criterion', choices=CRITERIA)
            sub.add_argument('--variant', choices=('triple', 'anchored'))
            sub.add_argument('--mode', choices=('float', 'exact'))
            sub.add_argument('--pool', type=_pool, help='Comma-separated exact scalars')
            sub.add_argument('--seed', type=int)
            sub.add_argument('--count', type=int)
            sub.add_argument('--min-gap', type=float)
            sub.add_argument('--abs-tol', type=float)
            sub.add_argument('--rel-tol', type=float)
            sub.add_argument('--quad-tol', type=float)
            sub.add_argument('--max-subdivisions', type=int)
            sub.add_argument('--fd-step', type=float)
            sub.add_argument('--constant', help='Recovery constant C')

        for sub in (check, recover, verify, demo):
            sub.add_argument('--from-report', help='Re-run the manifest embedded in a report')
            sub.add_argument('--out', help='Report path (default: standard output)')
            sub.add_argument('--function-out', help='Recovered function table path')
            sub.add_argument('--xlsx', help='Also write the report as a workbook')

    def _manifest(self, options):
        outputs = {
            'out': options.get('out'),
            'function_out': options.get('function_out'),
            'xlsx': options.get('xlsx'),
        }
        if options.get('from_report'):
            with open(options['from_report'], encoding='utf-8') as handle:
                data = json.load(handle)
            if not isinstance(data, dict) or 'manifest' not in data:
                raise ValueError(f"{options['from_report']} holds no run manifest")
            manifest = RunManifest.from_dict(data['manifest'], **outputs)
            if manifest.command != options['command']:
                raise ValueError(
                    f"the report was made by '{manifest.command}', not '{options['command']}'"
                )
            return manifest

        given = {
            name: options[name]
            for name in MANIFEST_OPTIONS
            if options.get(name) is not None
        }
        if options['command'] == 'demo':
            given = {'builtin': options.get('name')}
        return RunManifest(command=options['command'], **given, **outputs)

    def handle(self, *args, **options):
        try:
            manifest = self._manifest(options)
            outcome = run(manifest)
            text = outcome.render()
            if manifest.out:
                with open(manifest.out, 'w', encoding='utf-8') as handle:
                    handle.write(text)
            else:
                self.stdout.write(text, ending='')
            if manifest.function_out and outcome.recovered and outcome.exit_code == 0:
                with open(manifest.function_out, 'w', encoding='utf-8') as handle:
                    outcome.recovered.export(handle, outcome.points)
            if manifest.xlsx:
                export_xlsx(outcome.to_dict(), manifest.xlsx)
        except (DQError, ValueError, OSError) as exc:
            raise CommandError(str(exc), returncode=USAGE_ERROR) from exc

        if outcome.exit_code:
            sys.exit(outcome.exit_code)
