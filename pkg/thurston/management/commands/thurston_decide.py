from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Decides combinatorial equivalence of two maps."
    command = "decide"
