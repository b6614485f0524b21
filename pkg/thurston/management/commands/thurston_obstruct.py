from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Searches for a Thurston obstruction, or the canonical one."
    command = "obstruct"
