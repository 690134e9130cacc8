from pathlib import Path
from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='dqkit-insecure-dummy-key')
DEBUG = config('DEBUG', default=False, cast=bool)
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'scalars',
    'expressions',
    'sampling',
    'quadrature',
    'criteria',
    'recovery',
    'verification',
    'reports',
]

# Batch toolkit: nothing is persisted
DATABASES = {}

USE_TZ = True
TIME_ZONE = 'UTC'

# Breakpoint memo of integral recovery
CACHES = {
    'default': {
        'BACKEND': 'django.core.cache.backends.locmem.LocMemCache',
    },
    'recovery': {
        'BACKEND': config(
            'DQ_CACHE_BACKEND',
            default='django.core.cache.backends.locmem.LocMemCache',
        ),
        'LOCATION': config('DQ_CACHE_LOCATION', default='dq-recovery'),
        'TIMEOUT': None,
        'OPTIONS': {
            'MAX_ENTRIES': config('DQ_CACHE_MAX_ENTRIES', default=10000, cast=int),
        },
    },
}

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': config('DQ_LOG_LEVEL', default='INFO'),
    },
}

# Criterion defaults (float mode)
DQ_ABS_TOL = config('DQ_ABS_TOL', default=1e-9, cast=float)
DQ_REL_TOL = config('DQ_REL_TOL', default=1e-9, cast=float)

# Quadrature
DQ_QUAD_TOL = config('DQ_QUAD_TOL', default=1e-10, cast=float)
DQ_MAX_SUBDIVISIONS = config('DQ_MAX_SUBDIVISIONS', default=200, cast=int)

# Sampling plans
DQ_SEED = config('DQ_SEED', default=42, cast=int)
DQ_COUNT = config('DQ_COUNT', default=64, cast=int)
DQ_MIN_GAP = config('DQ_MIN_GAP', default=1e-3, cast=float)

# Central-difference step of the partials identity check
DQ_FD_STEP = config('DQ_FD_STEP', default=1e-4, cast=float)

# Wall time makes reports differ between runs; off unless asked for
DQ_REPORT_WALL_TIME = config('DQ_REPORT_WALL_TIME', default=False, cast=bool)
