from ._base import ThurstonCommand


class Command(ThurstonCommand):
    help = "Lists curves of the reference triangulation of a map."
    command = "curves"
