from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Writes the bundled example maps to a directory."
    command = "export-corpus"
