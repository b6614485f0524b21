from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Searches for a Levy cycle."
    command = "levy"
