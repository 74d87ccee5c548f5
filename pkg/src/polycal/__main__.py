"""Allow `python -m polycal` as an alias for the console command."""

import sys

from .cli import main

sys.exit(main())
