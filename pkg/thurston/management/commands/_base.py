from django.core.management.base import BaseCommand, CommandError

from thurston.cli import ARGUMENTS, INPUT_ERROR, add_common_arguments, run_options


class ThurstonCommand(BaseCommand):
    """
    Runs the :mod:`thurston.cli` command named by ``command`` and writes
    its report; input errors and inconclusive results raise
    :class:`CommandError` with the exit code of the command line tool.
    """

    command = None

    def add_arguments(self, parser):
        _, add_arguments = ARGUMENTS[self.command]
        add_arguments(parser)
        add_common_arguments(parser)

    def handle(self, *args, **options):
        report = run_options(self.command, options)
        output = report.render()
        if report.exit_code == 0:
            self.stdout.write(output, ending="")
            return
        if report.exit_code == INPUT_ERROR:
            raise CommandError(output.rstrip("\n"), returncode=report.exit_code)
        self.stdout.write(output, ending="")
        raise CommandError("Inconclusive within budget.", returncode=report.exit_code)
