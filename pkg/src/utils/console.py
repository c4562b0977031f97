import sys

from tqdm import tqdm


def info(msg: str):
    """Status line on stderr; goes through tqdm so it does not break an active progress bar."""
    tqdm.write(msg, file=sys.stderr)


def warn(msg: str):
    tqdm.write(f"Warning: {msg}", file=sys.stderr)


def error(msg: str):
    tqdm.write(f"error: {msg}", file=sys.stderr)


def progress(iterable, desc: str, total=None, enabled: bool = True):
    """tqdm bar on stderr, silenced when disabled or when stderr is not a terminal."""
    disable = not enabled or not sys.stderr.isatty()
    return tqdm(iterable, desc=desc, total=total, file=sys.stderr, disable=disable)
