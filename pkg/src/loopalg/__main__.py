import sys

from loopalg.cli import main

sys.exit(main())
