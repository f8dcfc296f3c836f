import sys

from ncbound.cli import main

sys.exit(main())
