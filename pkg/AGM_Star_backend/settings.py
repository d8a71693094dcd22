"""
Django settings for the AGM star operation project.
"""

import sys
from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-agm-star-local-key')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = []

# Application definition
DJANGO_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
]

THIRD_PARTY_APPS = [
    'rest_framework',
]

LOCAL_APPS = [
    'apps.common',
    'apps.agm_core',
    'apps.theta',
    'apps.elliptic',
    'apps.star',
    'apps.verify',
    'apps.cli',
]

INSTALLED_APPS = DJANGO_APPS + THIRD_PARTY_APPS + LOCAL_APPS

# Nothing is persisted; the database only exists so Django can boot.
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': config('DB_NAME', default=str(BASE_DIR / 'db.sqlite3')),
    }
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Numerical tolerances and iteration caps
STAR_TOLERANCES = {
    'agm_rel_tol': config('STAR_AGM_REL_TOL', default=4 * sys.float_info.epsilon, cast=float),
    'root_abs_tol': config('STAR_ROOT_ABS_TOL', default=1e-13, cast=float),
    'series_eps': config('STAR_SERIES_EPS', default=1e-16, cast=float),
    'quad_tol': config('STAR_QUAD_TOL', default=1e-12, cast=float),
    'agm_max_iter': config('STAR_AGM_MAX_ITER', default=64, cast=int),
    'root_max_iter': config('STAR_ROOT_MAX_ITER', default=200, cast=int),
    'series_max_terms': config('STAR_SERIES_MAX_TERMS', default=10_000_000, cast=int),
    'quad_max_panels': config('STAR_QUAD_MAX_PANELS', default=4096, cast=int),
}

# Default seed of the verification grid
STAR_VERIFY_SEED = config('STAR_VERIFY_SEED', default=20240601, cast=int)

# Celery Configuration
CELERY_BROKER_URL = config('CELERY_BROKER_URL', default='memory://')
CELERY_RESULT_BACKEND = config('CELERY_RESULT_BACKEND', default='cache+memory://')

# Celery Task Settings
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TIMEZONE = TIME_ZONE
CELERY_ENABLE_UTC = True

# Batch rows run in-process unless a real broker is configured
CELERY_TASK_ALWAYS_EAGER = config('CELERY_TASK_ALWAYS_EAGER', default=True, cast=bool)
CELERY_TASK_EAGER_PROPAGATES = True

CELERY_TASK_ROUTES = {
    'apps.cli.tasks.evaluate_row': {'queue': 'batch'},
}

CELERY_WORKER_PREFETCH_MULTIPLIER = 1
CELERY_TASK_TIME_LIMIT = 5 * 60  # 5 minutes

# Logging Configuration
LOG_LEVEL = config('LOG_LEVEL', default='WARNING')

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
        # stderr only: stdout carries command results
        'console': {
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'formatter': 'verbose' if DEBUG else 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'apps': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}
