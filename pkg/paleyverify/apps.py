from django.apps import AppConfig
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured


class PaleyverifyConfig(AppConfig):
    name = 'paleyverify'
    verbose_name = 'Power residues and Paley clique verification'

    def ready(self):
        """Reject settings the verifiers cannot honour"""
        bits = settings.PALEY_AMBIENT_BITS
        if not 1 <= bits <= 40:
            raise ImproperlyConfigured(f'PALEY_AMBIENT_BITS must lie in [1, 40], got {bits}')
        if settings.PALEY_JOBS < 1:
            raise ImproperlyConfigured('PALEY_JOBS must be at least 1')
        if settings.PALEY_TOLERANCE <= 0:
            raise ImproperlyConfigured('PALEY_TOLERANCE must be positive')
        if settings.PALEY_REPRESENTATIVES < 1:
            raise ImproperlyConfigured('PALEY_REPRESENTATIVES must be at least 1')
