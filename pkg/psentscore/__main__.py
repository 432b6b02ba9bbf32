"""Allow ``python -m psentscore``."""

import sys

from psentscore.cli import main

sys.exit(main())
