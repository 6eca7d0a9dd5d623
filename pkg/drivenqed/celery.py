"""
Celery configuration for drivenqed.

Sweep points are dispatched as celery tasks. With CELERY_TASK_ALWAYS_EAGER
(the default) they run in-process; point REDIS_URL at a broker and turn eager
mode off to spread a sweep over workers.
"""

import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'drivenqed.settings')

app = Celery('drivenqed')

app.config_from_object('django.conf:settings', namespace='CELERY')

app.autodiscover_tasks()
