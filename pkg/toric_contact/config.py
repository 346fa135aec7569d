import os


def _flag(name: str, default: str) -> bool:
    return os.environ.get(name, default).strip().lower() in ("1", "true", "yes", "on")


class AppConfig:
    # URL for general Redis connections (finalize locks)
    redis_url = os.environ.get("REDIS_URL", "redis://localhost:6379/0")

    # URL specifically for Celery message broker
    broker_url = os.environ.get("CELERY_BROKER_URL", "redis://localhost:6379/1")

    # Run survey tasks in-process; the CLI then needs neither broker nor Redis
    survey_eager = _flag("TORIC_SURVEY_EAGER", "true")

    finalize_countdown = int(os.environ.get("TORIC_FINALIZE_COUNTDOWN", "5"))

    # Entry bound for random re-coordinatizations of surveyed fans
    unimodular_bound = int(os.environ.get("TORIC_UNIMODULAR_BOUND", "5"))

    log_level = os.environ.get("TORIC_LOG_LEVEL", "WARNING").upper()


settings = AppConfig()
