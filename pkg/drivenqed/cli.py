"""
``drivenqed`` console entry point.

Forwards to the management commands; ``ham-dump`` is accepted as an alias
for ``ham_dump``.
"""

import os
import sys

ALIASES = {'ham-dump': 'ham_dump'}


def main(argv=None):
    """Run a drivenqed command; exit codes come from CommandError.returncode."""
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'drivenqed.settings')
    from django.core.management import execute_from_command_line

    args = list(sys.argv[1:] if argv is None else argv)
    if args:
        args[0] = ALIASES.get(args[0], args[0])
    execute_from_command_line(['drivenqed', *args])


if __name__ == '__main__':
    main()
