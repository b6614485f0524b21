from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Checks a map file and prints what it holds."
    command = "validate"
