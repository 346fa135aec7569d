import logging
from collections import Counter
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .errors import ToricError
from .fanfile import load_fan, serialize_fan
from .models import SurveyJob, SurveyRun
from .state import STATE
from .tasks import classify_fan_job

logger = logging.getLogger(__name__)


def _dedupe_key(text: str) -> str:
    try:
        return serialize_fan(load_fan(text))
    except (ToricError, KeyError, IndexError):
        return text.strip()


class SurveyOrchestrator:
    """
    Lifecycle of a survey run: job creation, progress tracking and finalization.
    """
    def start_survey(self, entries: Sequence[Tuple[str, str]], images: int = 0, seed: int = 0) -> Dict[str, Any]:
        """entries are (label, fan text) pairs; fans equal up to canonical order run once."""
        run_id = STATE.get_next_run_id()
        run = SurveyRun(id=run_id, status="RUNNING")
        STATE.create_run(run)
        logger.info(f"Started survey {run.id} with {len(entries)} entries.")

        unique: Dict[str, Tuple[str, str]] = {}
        for label, text in entries:
            if text and text.strip():
                unique.setdefault(_dedupe_key(text), (label, text))

        # all jobs exist before the first dispatch: eager tasks finalize inline
        jobs: List[SurveyJob] = []
        for position, (label, text) in enumerate(unique.values()):
            job = SurveyJob(id=STATE.get_next_job_id(), run_id=run.id, label=label, fan_text=text,
                            images=images, seed=seed + position)
            STATE.create_job(job)
            jobs.append(job)

        for job in jobs:
            classify_fan_job.delay(job_id=job.id, run_id=run.id)

        if not jobs:
            self.finalize_survey(run.id)

        return {"run_id": run.id, "jobs_created": len(jobs)}

    def get_survey_status(self, run_id: int) -> Optional[Dict[str, Any]]:
        run = STATE.get_run(run_id)
        if not run:
            return None

        jobs = STATE.get_jobs_for_run(run_id)
        total_jobs = len(jobs)

        status_counts = {"PENDING": 0, "PROCESSING": 0, "DONE": 0, "FAILED": 0}
        verdicts: Counter = Counter()
        failed_jobs_details = []
        for job in jobs:
            status_counts[job.status] = status_counts.get(job.status, 0) + 1
            if job.verdict:
                verdicts[job.verdict] += 1
            if job.status == "FAILED":
                failed_jobs_details.append({"job_id": job.id, "label": job.label, "error": job.last_error})

        finished = status_counts["DONE"] + status_counts["FAILED"]
        progress = finished / total_jobs if total_jobs > 0 else 1.0

        return {
            "run_id": run.id,
            "run_status": run.status,
            "progress": progress,
            "total_jobs": total_jobs,
            "status_counts": status_counts,
            "verdicts": dict(sorted(verdicts.items())),
            "failed_jobs": failed_jobs_details,
            "summary": run.summary,
        }

    def finalize_survey(self, run_id: int) -> bool:
        run = STATE.get_run(run_id)
        if not run or run.status == "FINISHED":
            return False

        if STATE.has_open_jobs(run_id):
            logger.debug(f"Survey {run_id} still has open jobs.")
            return False

        jobs = STATE.get_jobs_for_run(run_id)

        run.status = "FINISHED"
        run.finished_at = datetime.now(timezone.utc)
        run.updated_at = run.finished_at

        done = [j for j in jobs if j.status == "DONE"]
        duration = (run.finished_at - run.created_at).total_seconds()
        run.summary = {
            "total": len(jobs),
            "done": len(done),
            "failed": len(jobs) - len(done),
            "verdicts": dict(sorted(Counter(j.verdict for j in done if j.verdict).items())),
            "split_tangent_mismatches": sum(1 for j in done if j.split_tangent_consistent is False),
            "image_disagreements": sum(j.image_disagreements for j in done),
            "duration_seconds": round(duration, 2),
        }

        logger.info(f"Survey {run_id} finalized. Summary: {run.summary}")
        return True
