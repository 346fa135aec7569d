import logging
from collections import defaultdict
from datetime import datetime, timezone
from threading import RLock
from typing import Any, Dict, List, Optional

from .models import SurveyJob, SurveyRun

logger = logging.getLogger(__name__)

OPEN_STATUSES = ("PENDING", "PROCESSING")


class SurveyState:
    """
    Process-wide store of survey runs and their jobs.

    Jobs are indexed per run in creation order. All access goes through one
    re-entrant lock, so eager tasks running inside an orchestrator call can
    use the store too.
    """
    _instance = None
    _lock = RLock()

    def __new__(cls):
        with cls._lock:
            if cls._instance is None:
                instance = super().__new__(cls)
                instance._reset()
                cls._instance = instance
                logger.info("SurveyState initialized.")
        return cls._instance

    def _reset(self) -> None:
        self._runs: Dict[int, SurveyRun] = {}
        self._jobs: Dict[int, SurveyJob] = {}
        self._jobs_by_run: Dict[int, List[int]] = defaultdict(list)
        self._next_ids = {"run": 0, "job": 0}

    def _next(self, kind: str) -> int:
        with self._lock:
            self._next_ids[kind] += 1
            return self._next_ids[kind]

    def get_next_run_id(self) -> int:
        return self._next("run")

    def get_next_job_id(self) -> int:
        return self._next("job")

    def create_run(self, run: SurveyRun) -> None:
        with self._lock:
            if run.id in self._runs:
                raise ValueError(f"Survey run with id {run.id} already exists.")
            self._runs[run.id] = run

    def get_run(self, run_id: int) -> Optional[SurveyRun]:
        with self._lock:
            return self._runs.get(run_id)

    def create_job(self, job: SurveyJob) -> None:
        with self._lock:
            if job.id in self._jobs:
                raise ValueError(f"Survey job with id {job.id} already exists.")
            self._jobs[job.id] = job
            self._jobs_by_run[job.run_id].append(job.id)
            logger.debug(f"Survey job {job.id} ({job.label}) queued for survey {job.run_id}.")

    def get_job(self, job_id: int) -> Optional[SurveyJob]:
        with self._lock:
            return self._jobs.get(job_id)

    def update_job(self, job: SurveyJob, **changes: Any) -> SurveyJob:
        """Apply field changes to a stored job and stamp updated_at."""
        with self._lock:
            if job.id not in self._jobs:
                raise ValueError(f"Survey job with id {job.id} not found for update.")
            for name, value in changes.items():
                setattr(job, name, value)
            job.updated_at = datetime.now(timezone.utc)
            self._jobs[job.id] = job
            return job

    def get_jobs_for_run(self, run_id: int) -> List[SurveyJob]:
        with self._lock:
            return [self._jobs[job_id] for job_id in self._jobs_by_run.get(run_id, ())]

    def has_open_jobs(self, run_id: int) -> bool:
        return any(job.status in OPEN_STATUSES for job in self.get_jobs_for_run(run_id))

    def clear_all(self) -> None:
        with self._lock:
            self._reset()
            logger.debug("SurveyState cleared.")


STATE = SurveyState()
