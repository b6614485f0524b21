from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Decomposes a map along a multicurve."
    command = "decompose"
