from celery import Celery

from .config import settings

celery_app = Celery(
    "toric_contact_survey",
    broker=settings.broker_url,
    include=["toric_contact.tasks"],
)

celery_app.conf.update(
    task_ignore_result=True,
    worker_prefetch_multiplier=1,
    task_acks_late=True,
    task_reject_on_worker_lost=True,
    broker_connection_retry_on_startup=True,
    task_track_started=True,

    # Eager mode runs every task inline, countdown included
    task_always_eager=settings.survey_eager,
    task_eager_propagates=False,
)
