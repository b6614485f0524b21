from django.apps import AppConfig


class ThurstonConfig(AppConfig):
    name = "thurston"
    verbose_name = "Thurston maps"
