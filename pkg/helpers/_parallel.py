import multiprocessing as mp
import os
from typing import Any, Callable, List, Optional

import tqdm


def execute(func: Callable, items: List[Any], workers: Optional[int] = None, debug: bool = False) -> List[Any]:
    """Map `func` over `items` in independent processes, keeping the input order of results.

    `func` must be picklable (a module level function or a `functools.partial` of one).
    """
    if not items:
        return []
    workers = min(workers or os.cpu_count() or 1, len(items))
    if debug or workers == 1:
        return [func(item) for item in tqdm.tqdm(items, total=len(items))]

    results = []
    with mp.get_context('spawn').Pool(workers) as pool:
        with tqdm.tqdm(total=len(items), leave=True) as pbar:
            for result in pool.imap(func, items):
                pbar.update(1)
                results.append(result)

    return results
