from django.apps import AppConfig


class RecoveryConfig(AppConfig):
    name = 'recovery'

    _startup_reset_performed = False

    def ready(self):
        super().ready()

        if RecoveryConfig._startup_reset_performed:
            return

        from .cache_utils import reset_breakpoint_cache

        # memo keys are per-instance tokens, stale ones are never read again
        reset_breakpoint_cache()
        RecoveryConfig._startup_reset_performed = True
