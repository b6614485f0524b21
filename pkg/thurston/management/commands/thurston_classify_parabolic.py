from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Geometrizes a map with parabolic orbifold."
    command = "classify-parabolic"
