from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Prints the orbifold signature and Euler characteristic of a map."
    command = "orbifold"
