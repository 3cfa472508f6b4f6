from pathlib import Path
from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-paley-verify-local-only')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'paleyverify',
]

# No persistence: every report is written to stdout.
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

# ✅ Verification limits
PALEY_AMBIENT_BITS = config('PALEY_AMBIENT_BITS', default=24, cast=int)
PALEY_JOBS = config('PALEY_JOBS', default=1, cast=int)
PALEY_REPRESENTATIVES = config('PALEY_REPRESENTATIVES', default=20, cast=int)
PALEY_SRG_MAX_VERTICES = config('PALEY_SRG_MAX_VERTICES', default=8192, cast=int)
PALEY_TOLERANCE = config('PALEY_TOLERANCE', default=1e-6, cast=float)
PALEY_DEFAULT_SEED = config('PALEY_DEFAULT_SEED', default=1, cast=int)

# ✅ Report schema written into every JSON line
PALEY_SCHEMA_VERSION = 1

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'paleyverify': {
            'handlers': ['console'],
            'level': config('PALEY_LOG_LEVEL', default='WARNING'),
            'propagate': False,
        },
    },
}
