import logging
import random

from .celery_app import celery_app
from .classify import classify_contact, fan_isomorphic, has_split_tangent, is_p1_power
from .config import settings
from .fan import transform_fan
from .fanfile import parse_fan
from .lattice import random_unimodular
from .redis_client import finalize_lock, release_finalize_lock
from .state import STATE

logger = logging.getLogger(__name__)


@celery_app.task(bind=True)
def finalize_survey_task(self, run_id: int):
    lock_key = f"finalize_survey_lock:{run_id}"
    lock = finalize_lock(lock_key, timeout=60)

    if not lock.acquire(blocking=False):
        logger.info(f"Finalization for survey {run_id} is already in progress. Skipping.")
        return

    try:
        from .orchestrator import SurveyOrchestrator  # circular: the orchestrator dispatches our tasks
        finalized = SurveyOrchestrator().finalize_survey(run_id)
        if finalized:
            logger.info(f"Survey {run_id} was successfully finalized.")
        else:
            logger.info(f"Survey {run_id} is not yet ready to be finalized.")
    except Exception as e:
        logger.exception(f"An error occurred while trying to finalize survey {run_id}: {e}")
    finally:
        release_finalize_lock(lock_key, lock)


def _image_disagreements(fan, verdict_line: str, images: int, seed: int) -> int:
    """Random unimodular images that lose the isomorphism witness or change verdict."""
    if fan.rank == 0 or images <= 0:
        return 0
    rng = random.Random(seed)
    disagreements = 0
    for _ in range(images):
        g = random_unimodular(fan.rank, settings.unimodular_bound, rng)
        image = transform_fan(fan, g)
        if fan_isomorphic(image, fan) is None or classify_contact(image).verdict.line != verdict_line:
            disagreements += 1
    return disagreements


@celery_app.task(bind=True, soft_time_limit=900, time_limit=1200)
def classify_fan_job(self, job_id: int, run_id: int):
    """Classify one surveyed fan and cross-check it; failures stay local to the job."""
    logger.info(f"Starting survey job {job_id} of survey {run_id}.")

    job = STATE.get_job(job_id)
    if not job:
        logger.error(f"Survey job {job_id} not found in state. Aborting.")
        return

    STATE.update_job(job, status="PROCESSING", attempts=job.attempts + 1)

    try:
        fan = parse_fan(job.fan_text)
        verdict = classify_contact(fan).verdict.line
        STATE.update_job(
            job,
            verdict=verdict,
            split_tangent_consistent=has_split_tangent(fan) == (is_p1_power(fan) is not None),
            image_disagreements=_image_disagreements(fan, verdict, job.images, job.seed),
            status="DONE",
        )
        logger.info(f"Survey job {job_id} finished: {verdict}.")

    except Exception as e:
        logger.exception(f"Survey job {job_id} failed: {e}")
        STATE.update_job(job, status="FAILED", last_error=str(e))

    finally:
        finalize_survey_task.apply_async(args=[run_id], countdown=settings.finalize_countdown)
