import logging
from concurrent.futures import ThreadPoolExecutor, as_completed

logger = logging.getLogger(__name__)


def assign_samples_to_workers(task, points, workers=1):
    """Run task(point) for each point and return the results in point order.

    Failures are collected and the one with the lowest point index is
    re-raised, so the outcome does not depend on completion order.
    """
    if workers <= 1 or len(points) <= 1:
        return [task(point) for point in points]

    results = [None] * len(points)
    failures = {}
    with ThreadPoolExecutor(max_workers=min(workers, len(points))) as executor:
        future_to_index = {executor.submit(task, point): index for index, point in enumerate(points)}
        for future in as_completed(future_to_index):
            index = future_to_index[future]
            try:
                results[index] = future.result()
            except Exception as exc:
                logger.debug("sample %d failed: %s", index, exc)
                failures[index] = exc

    if failures:
        raise failures[min(failures)]
    return results
