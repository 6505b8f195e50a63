"""
Standalone entry point: ``python -m grover.cli solve --lambda 0.25``.

Runs the ``d2p`` management command and returns its exit code instead of
exiting, so it can be driven from other Python code.
"""
import os
import sys
from typing import Optional, Sequence


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'd2p_search.settings')
    from django.core.management import execute_from_command_line

    try:
        execute_from_command_line(['d2p', 'd2p', *argv])
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 1
    return 0


if __name__ == '__main__':
    sys.exit(main())
