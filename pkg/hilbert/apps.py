from django.apps import AppConfig


class HilbertConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hilbert'
