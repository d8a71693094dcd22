from django.apps import AppConfig


class StarConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.star'
    verbose_name = 'AGM star operation'
