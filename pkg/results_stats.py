import argparse
import logging

from backend.results_store import ResultsStore

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    handlers=[
        logging.FileHandler('results_stats.log'),
        logging.StreamHandler()
    ]
)
logger = logging.getLogger('ResultsStats')


def show_results_stats(db_path: str, run_id: str = None):
    """Summarize stored theorem-suite runs."""
    try:
        store = ResultsStore(db_path)
        runs = store.list_runs()
        logger.info(f"Found {len(runs)} runs")
        if not runs:
            return

        run_id = run_id or runs[-1]
        logger.info(f"\nStatus counts for run {run_id}:")
        for status, count in sorted(store.status_counts(run_id).items()):
            logger.info(f"  {status}: {count}")

        failures = store.failures(run_id)
        if failures:
            logger.info("\nFailures:")
            for i, row in enumerate(failures, 1):
                logger.info(f"  {i}. {row['algebra']} / {row['check']} ({row['status']}): {row['detail']}")

        observations = store.small_field_observations()
        if observations:
            logger.info("\nChecks skipped over fields that were too small:")
            for row in observations:
                logger.info(f"  {row['run_id']}: {row['algebra']} / {row['check']}")
    except Exception as e:
        logger.error(f"Error reading results: {str(e)}")


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Summarize stored theorem-suite runs")
    parser.add_argument('--db', default='theorem_results.db')
    parser.add_argument('--run', default=None, help="run id (default: latest)")
    args = parser.parse_args()
    show_results_stats(args.db, args.run)
