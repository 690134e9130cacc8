from django.apps import AppConfig


class ScalarsConfig(AppConfig):
    name = 'scalars'
