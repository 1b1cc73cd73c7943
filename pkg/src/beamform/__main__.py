"""Allow `python -m beamform`."""

import sys

from .cli import main

sys.exit(main())
