from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Decides conjugacy of two integer 2x2 matrices in GL2(Z)."
    command = "matrix-conjugacy"
