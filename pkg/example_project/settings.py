import os

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SECRET_KEY = "postcritically-finite"
DEBUG = True
ALLOWED_HOSTS = []
INSTALLED_APPS = (
    # default
    "django.contrib.contenttypes",
    # extra
    "rest_framework",
    # project apps
    "thurston",
)

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

THURSTON = {
    "MAX_WEIGHT": 8,
    "MAX_WORD_LENGTH": 3,
    "BUDGET_SECONDS": 60,
}

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {"format": "{levelname} {name}: {message}", "style": "{"},
    },
    "handlers": {
        "console": {"class": "logging.StreamHandler", "formatter": "simple"},
    },
    "loggers": {
        "thurston": {
            "handlers": ["console"],
            "level": os.environ.get("THURSTON_LOG_LEVEL", "WARNING"),
        },
    },
}

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.path.join(BASE_DIR, "db.sqlite3"),
    }
}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True
