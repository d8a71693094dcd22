from django.apps import AppConfig


class AgmCoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.agm_core'
    verbose_name = 'Arithmetic-geometric mean'
