"""
WSGI config for the adedbench project.

Serves the read-only experiment ledger API (``/api/...``) and the admin.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'adedbench.settings')

application = get_wsgi_application()
