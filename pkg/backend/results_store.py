import json
import logging
from datetime import datetime
from typing import Any, Dict, List, Optional

from sqlalchemy import Column, DateTime, Float, Integer, String, Text, UniqueConstraint, create_engine, func, inspect
from sqlalchemy.orm import declarative_base, sessionmaker

logger = logging.getLogger('ResultsStore')

Base = declarative_base()


class SuiteRun(Base):
    __tablename__ = 'suite_runs'

    id = Column(Integer, primary_key=True)
    run_id = Column(String, unique=True)
    started_at = Column(DateTime)
    settings = Column(Text)  # JSON dump of the Settings used


class CheckResult(Base):
    __tablename__ = 'check_results'

    id = Column(Integer, primary_key=True)
    run_id = Column(String)
    algebra = Column(String)
    check = Column(String)
    status = Column(String)
    detail = Column(Text)
    duration = Column(Float, nullable=True)

    __table_args__ = (
        UniqueConstraint('run_id', 'algebra', 'check', name='uix_run_algebra_check'),
    )


def new_run_id() -> str:
    return datetime.now().strftime('%Y%m%d_%H%M%S')


class ResultsStore:
    def __init__(self, db_path: str = 'theorem_results.db'):
        logger.info(f"Opening results store {db_path}")
        self.db_engine = create_engine(f'sqlite:///{db_path}')
        inspector = inspect(self.db_engine)
        if not inspector.has_table('check_results'):
            logger.info("Creating results tables")
        Base.metadata.create_all(self.db_engine)
        self.Session = sessionmaker(bind=self.db_engine)

    def store_run(self, run_id: str, results: List[Dict[str, Any]], settings: Optional[Dict] = None) -> int:
        """Store one suite run. Returns the number of new result rows."""
        if not results:
            logger.warning("No results to store")
            return 0

        session = self.Session()
        try:
            if not session.query(SuiteRun).filter_by(run_id=run_id).first():
                session.add(SuiteRun(run_id=run_id, started_at=datetime.now(),
                                     settings=json.dumps(settings or {}, sort_keys=True)))
            stored = 0
            for result in results:
                existing = session.query(CheckResult).filter_by(
                    run_id=run_id,
                    algebra=result['algebra'],
                    check=result['check']
                ).first()
                if existing:
                    continue
                session.add(CheckResult(
                    run_id=run_id,
                    algebra=result['algebra'],
                    check=result['check'],
                    status=result['status'],
                    detail=result.get('detail', ''),
                    duration=result.get('time')
                ))
                stored += 1
            session.commit()
            logger.info(f"Stored {stored} results for run {run_id}")
            return stored
        except Exception as e:
            session.rollback()
            logger.error(f"Error storing results: {str(e)}")
            raise
        finally:
            session.close()

    def list_runs(self) -> List[str]:
        session = self.Session()
        try:
            return [r.run_id for r in session.query(SuiteRun).order_by(SuiteRun.id).all()]
        finally:
            session.close()

    def failures(self, run_id: str) -> List[Dict[str, str]]:
        session = self.Session()
        try:
            rows = session.query(CheckResult).filter(
                CheckResult.run_id == run_id,
                CheckResult.status.in_(['fail', 'error'])
            ).order_by(CheckResult.id).all()
            return [{'algebra': r.algebra, 'check': r.check, 'status': r.status, 'detail': r.detail} for r in rows]
        finally:
            session.close()

    def status_counts(self, run_id: str) -> Dict[str, int]:
        session = self.Session()
        try:
            rows = session.query(CheckResult.status, func.count(CheckResult.id)).filter(
                CheckResult.run_id == run_id
            ).group_by(CheckResult.status).all()
            return {status: count for status, count in rows}
        finally:
            session.close()

    def small_field_observations(self, run_id: Optional[str] = None) -> List[Dict[str, str]]:
        """Checks skipped because the field has too few elements."""
        session = self.Session()
        try:
            query = session.query(CheckResult).filter(
                CheckResult.status == 'skip',
                CheckResult.detail.like('FieldTooSmall%')
            )
            if run_id is not None:
                query = query.filter(CheckResult.run_id == run_id)
            return [{'run_id': r.run_id, 'algebra': r.algebra, 'check': r.check, 'detail': r.detail}
                    for r in query.order_by(CheckResult.id).all()]
        finally:
            session.close()
