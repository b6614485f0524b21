import logging
import time

from thurston.exceptions import BudgetExceeded
from thurston.settings import get_settings
from thurston.signals import budget_exhausted

logger = logging.getLogger(__name__)

# reason codes of Inconclusive results
BUDGET_EXHAUSTED = "budget_exhausted"
HOMEOMORPHISM_PIECE = "homeomorphism_piece"
UNSUPPORTED_MATRIX = "unsupported_matrix"
SELF_EQUIVALENCES = "self_equivalence_subgroup"
NO_CANDIDATE = "no_characterized_candidate"
NO_STANDARD_FORM = "no_standard_form"


class Inconclusive:
    """
    A search that stopped without deciding. ``reason`` is one of the reason
    codes above.
    """

    decided = False

    def __init__(self, reason=BUDGET_EXHAUSTED, detail=""):
        self.reason = reason
        self.detail = detail

    def __repr__(self):
        return "Inconclusive({!r})".format(self.reason)

    def __bool__(self):
        return False


class Budget:
    """
    Caps shared by every bounded search.

    ``weight`` bounds the total normal-coordinate weight of enumerated
    multicurves, ``word_length`` the length of enumerated mapping class
    words and ``seconds`` the wall-clock time, checked cooperatively by
    :meth:`check`.
    """

    def __init__(self, weight=None, word_length=None, seconds=None, rounds=None):
        conf = get_settings()
        self.weight = conf.MAX_WEIGHT if weight is None else weight
        self.word_length = conf.MAX_WORD_LENGTH if word_length is None else word_length
        self.seconds = conf.BUDGET_SECONDS if seconds is None else seconds
        self.rounds = conf.MAX_ROUNDS if rounds is None else rounds
        self.started_at = time.monotonic()

    def __repr__(self):
        return "Budget(weight={}, word_length={}, seconds={})".format(
            self.weight, self.word_length, self.seconds
        )

    @property
    def elapsed(self) -> float:
        return time.monotonic() - self.started_at

    @property
    def expired(self) -> bool:
        return self.seconds is not None and self.elapsed > self.seconds

    def check(self, operation=""):
        if self.expired:
            logger.info("budget exhausted in %s after %r", operation, self)
            budget_exhausted.send(sender=Budget, operation=operation, budget=self)
            raise BudgetExceeded(
                "{} ran out of time ({} s).".format(operation or "search", self.seconds)
            )

    def give_up(self, operation, reason=BUDGET_EXHAUSTED, detail=""):
        """
        Record an inconclusive outcome that did not raise.
        """
        logger.info("%s is inconclusive within %r: %s", operation, self, reason)
        budget_exhausted.send(sender=Budget, operation=operation, budget=self)
        return Inconclusive(reason, detail)


def as_budget(budget) -> Budget:
    if budget is None:
        return Budget()
    return budget
