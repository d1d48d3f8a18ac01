"""
WSGI config for blockoofa project.

Serves the design API; the numerical pipelines are also reachable through
``manage.py`` commands without a running server.
"""
import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'blockoofa.settings')

application = get_wsgi_application()
