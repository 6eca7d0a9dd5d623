"""
Django settings for drivenqed.

Only the app registry, logging and the numerical defaults are used; there is
no database and no HTTP surface. Every DRIVENQED_* value can be overridden
from the environment or a .env file.
"""

import os
from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='drivenqed-local-only')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    # Third party apps
    'rest_framework',

    # Local apps
    'hilbert',
    'dynamics',
    'targets',
    'analysis',
    'protocols',
]

DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# REST Framework Configuration
REST_FRAMEWORK = {
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'DEFAULT_PARSER_CLASSES': [
        'rest_framework.parsers.JSONParser',
    ],
    'UNAUTHENTICATED_USER': None,
}

# Numerical defaults
DRIVENQED_SINGLE_MODE_CUTOFF = config('DRIVENQED_SINGLE_MODE_CUTOFF', default=40, cast=int)
DRIVENQED_TWO_MODE_CUTOFF = config('DRIVENQED_TWO_MODE_CUTOFF', default=20, cast=int)
DRIVENQED_CAT2_CUTOFF = config('DRIVENQED_CAT2_CUTOFF', default=60, cast=int)
DRIVENQED_DEFAULT_SAMPLES = config('DRIVENQED_DEFAULT_SAMPLES', default=21, cast=int)
DRIVENQED_MAX_OMEGA_RATIO = config('DRIVENQED_MAX_OMEGA_RATIO', default=1000.0, cast=float)
DRIVENQED_SLOW_RUN_SECONDS = config('DRIVENQED_SLOW_RUN_SECONDS', default=5.0, cast=float)

# Celery Configuration
CELERY_BROKER_URL = config('REDIS_URL', default='redis://localhost:6379/0')
CELERY_RESULT_BACKEND = config('REDIS_URL', default='redis://localhost:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True

LOG_LEVEL = config('LOG_LEVEL', default='INFO')
LOG_DIR = Path(config('DRIVENQED_LOG_DIR', default=str(BASE_DIR / 'logs')))

# Logging Configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {process:d} {thread:d} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'file': {
            'level': 'INFO',
            'class': 'logging.FileHandler',
            'filename': LOG_DIR / 'drivenqed.log',
            'formatter': 'verbose',
        },
        'console': {
            'level': 'WARNING',
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console', 'file'],
        'level': 'INFO',
    },
    'loggers': {
        app: {
            'handlers': ['console', 'file'],
            'level': LOG_LEVEL,
            'propagate': False,
        }
        for app in ('hilbert', 'dynamics', 'targets', 'analysis', 'protocols')
    },
}

# Create logs directory if it doesn't exist
os.makedirs(LOG_DIR, exist_ok=True)
