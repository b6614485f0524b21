import os

from django.conf import settings
from django.test.signals import setting_changed
from rest_framework.settings import APISettings

USER_SETTINGS = getattr(settings, "THURSTON", None)

DEFAULTS = {
    "MAX_WEIGHT": 8,
    "MAX_WORD_LENGTH": 3,
    "BUDGET_SECONDS": 60,
    "MAX_ROUNDS": 64,
    "HURWITZ_MAX_STATES": 20000,
    "GL2Z_ORACLE_BOUND": 6,
    "FORMAT_VERSION": 1,
    "CORPUS_DIRS": [],
    "REPORT_SCHEMA": os.path.join(
        os.path.dirname(os.path.abspath(__file__)), "schema", "report.schema.json"
    ),
}

IMPORT_STRINGS = set()

thurston_settings = APISettings(USER_SETTINGS, DEFAULTS, IMPORT_STRINGS)


def reload_api_settings(*args, **kwargs):
    global thurston_settings
    setting, value = kwargs["setting"], kwargs["value"]
    if setting == "THURSTON":
        thurston_settings = APISettings(value, DEFAULTS, IMPORT_STRINGS)


setting_changed.connect(reload_api_settings)


def get_settings() -> APISettings:
    """
    Current settings object. Modules call this instead of importing
    ``thurston_settings`` directly so that ``override_settings`` is honoured.
    """
    return thurston_settings
