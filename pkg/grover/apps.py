from django.apps import AppConfig


class GroverConfig(AppConfig):
    name = 'grover'
    verbose_name = 'D2p Grover search'
