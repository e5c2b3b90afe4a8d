import contextlib

LINES = []


@contextlib.contextmanager
def criterion(number, text):
    try:
        yield
    except BaseException:
        LINES.append(f"FAIL  criterion {number}: {text}")
        print(LINES[-1])
        raise
    LINES.append(f"PASS  criterion {number}: {text}")
    print(LINES[-1])
