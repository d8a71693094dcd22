from django.apps import AppConfig


class ThetaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.theta'
    verbose_name = 'Theta series on the real nome'
